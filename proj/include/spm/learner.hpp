#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "spm/builder.hpp"

namespace spm {

struct LearnParams {
  SearchParams search;
  std::size_t max_grammars_kept = 2;
  std::size_t max_iterations = 50;  // stages of the grammar search
  CostModel cost_model = CostModel::Frequency;
  double literal_factor = 8.0;
  /// Throws std::invalid_argument on a zero count or a non-positive factor.
  void validate() const;
};

struct GrammarScore {
  double g_size = 0;
  double e_size = 0;
  double total = 0;
};

struct ScoredGrammar {
  Grammar grammar;
  GrammarScore score;
};

struct LearnResult {
  std::vector<ScoredGrammar> grammars;  // ascending total
  std::vector<std::string> residual_discarded;
};

/// Fresh class symbols A, B, ..., Z, then P1, P2, ..., never reusing a name
/// that is already taken. Discriminators are "1", "2", ...; the tail of
/// class K is "#K".
class IdAllocator {
 public:
  IdAllocator() = default;
  explicit IdAllocator(const Corpus& c, const Grammar& g = {});
  Symbol next_class();
  void reserve(Symbol s) { taken_.insert(std::string(s.name())); }
  static Symbol discriminator(std::size_t n);
  static Symbol tail(Symbol cls);

 private:
  std::unordered_set<std::string> taken_;
  std::size_t next_ = 0;
};

/// Splits a two-row alignment (New against one Old pattern's contents) into
/// maximal matched runs and the gaps between them. Each run becomes a
/// pattern "K 1 run #K"; each gap becomes a class with one member per
/// non-empty side (New side first); one abstract pattern per side lists the
/// classes in order. Throws DataError without a hit on the Old contents or
/// for an alignment that does not have exactly two rows.
std::vector<PatternPtr> derive_patterns(const Alignment& a, IdAllocator& ids);

/// Reads the corpus in order, keeping a working grammar: the first sentence
/// is stored as "A 1 ... #A", later ones are parsed against the working
/// grammar and either add frequency (fully recognised) or contribute
/// derived patterns. Every sentence is also stored verbatim in the pool.
/// Pattern frequencies in the result are occurrence counts.
Grammar generate_candidates(const Corpus& c, const LearnParams& params);

/// Literal cost of every corpus symbol.
double raw_cost(const Corpus& c, const CostTable& t);

/// g_size prices ID symbols and references at cost and data symbols at
/// literal cost. e_size charges each sentence the smallest b_enc among its
/// complete parses, or its raw literal cost when none was found.
GrammarScore grammar_score(const Grammar& g, const Corpus& c, const CostTable& t, const SearchParams& params);
/// Same, with a cost table computed from g and c.
GrammarScore grammar_score(const Grammar& g, const Corpus& c, const LearnParams& params);

/// Scores subsets of a candidate pool with one cost table computed from the
/// pool and the corpus. A sentence's encoding under a subset S is the best
/// complete parse found within S: starting from the whole pool, while the
/// best parse of the current grammar uses a pattern outside S, that pattern
/// is dropped and the smaller grammar is parsed. Parses are memoized per
/// grammar, so scoring many subsets needs few builds.
class SubsetScorer {
 public:
  SubsetScorer(Grammar pool, Corpus c, const LearnParams& params);
  /// subset: strictly increasing pool indices.
  GrammarScore score(const std::vector<std::size_t>& subset);
  Grammar grammar(const std::vector<std::size_t>& subset) const;
  const CostTable& costs() const { return costs_; }
  const Grammar& pool() const { return pool_; }
  std::size_t builds() const { return builds_; }

 private:
  struct Parse {
    std::vector<std::size_t> used;  // pool indices, increasing
    double b_enc = 0;
  };
  const std::optional<Parse>& best_within(std::size_t sentence, const std::vector<bool>& members);

  Grammar pool_;
  Corpus corpus_;
  SearchParams search_;
  CostTable costs_;
  std::vector<double> raw_;
  std::vector<std::map<std::vector<bool>, std::optional<Parse>>> memo_;
  std::size_t builds_ = 0;
};

/// Beam search over non-empty subsets of the pool, one pattern added or
/// removed per step, scored by SubsetScorer. Throws std::invalid_argument
/// for an empty pool.
LearnResult sift_grammars(const Grammar& pool, const Corpus& c, const LearnParams& params);
/// Same, reusing the scorer's memoized parses.
LearnResult sift_grammars(SubsetScorer& scorer, const LearnParams& params);

LearnResult learn(const Corpus& c, const LearnParams& params);

/// Sentences obtained by decoding every code that a derivation from a
/// root pattern (one whose class is referenced by no other pattern) would
/// produce. Recursion is cut at max_depth; at most max_sentences are
/// returned, sorted and without duplicates.
std::vector<std::vector<Symbol>> generate_language(const Grammar& g, const CostTable& t, const SearchParams& params,
                                                   std::size_t max_depth = 6, std::size_t max_sentences = 1000);

}  // namespace spm
