#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "spm/bitset.hpp"
#include "spm/costs.hpp"

namespace spm {

struct SearchParams {
  std::size_t beam_width = 200;
  std::size_t max_alternatives = 10;
  std::size_t depth = 3;  // alternatives kept per search state; also paces the builder
  std::size_t min_hit_run = 1;

  /// Throws std::invalid_argument unless all fields are >= 1 and
  /// max_alternatives <= beam_width.
  void validate() const;
};

/// An order-preserving set of pairs between two sequences.
struct MatchSet {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double score = 0;

  /// Number of maximal runs of pairs that advance by one on both sides.
  std::size_t runs() const;
};

/// Something a sequence can be matched against: a set of slots carrying
/// symbols, partially ordered by `before` (ancestor closure, per slot).
/// A plain sequence is a chain; an alignment under construction is a DAG
/// of columns.
struct MatchTarget {
  std::vector<Symbol> symbols;
  std::vector<DynBitset> before;
  /// Extra veto on pairing slot with sequence position; may be empty.
  std::function<bool(std::size_t slot, std::size_t pos)> blocked;
  /// Score contributed by pairing slot with position.
  std::function<double(std::size_t slot, std::size_t pos)> weight;
};

/// Staged beam search: scan seq left to right and extend every retained
/// partial match by each admissible hit. States that have excluded the same
/// set of slots are interchangeable for the future, so only the best
/// `depth` of each such group survive, and at most beam_width in total.
/// Pairs are (slot, position). Results are sorted best first.
std::vector<MatchSet> staged_match(const MatchTarget& target, std::span<const Symbol> seq,
                                   const SearchParams& params);

/// Ranked full and partial matches between a and b; pairs are (pos_a, pos_b).
/// Throws CostError if a symbol of a or b has no cost.
std::vector<MatchSet> find_matches(std::span<const Symbol> a, std::span<const Symbol> b, const CostTable& costs,
                                   const SearchParams& params);

/// Exact heaviest common subsequence by dynamic programming. Inputs are
/// limited to 16 symbols each (throws std::invalid_argument beyond that).
MatchSet hcs_oracle(std::span<const Symbol> a, std::span<const Symbol> b, const CostTable& costs);

/// Empty when ms is strictly increasing on both sides and every pair joins
/// equal symbols; otherwise describes the first violation.
std::string check_matchset(const MatchSet& ms, std::span<const Symbol> a, std::span<const Symbol> b);

/// Ordering used for ranked MatchSets: score desc, fewer runs, then
/// lexicographically smaller pairs.
bool match_better(const MatchSet& x, const MatchSet& y);

}  // namespace spm
