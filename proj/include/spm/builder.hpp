#pragma once

#include <vector>

#include "spm/coding.hpp"
#include "spm/matcher.hpp"

namespace spm {

struct ScoredAlignment {
  Alignment alignment;
  AlignmentScore score;
  double probability = 0;  // relative to the other alignments returned with it
};

/// Total order used to rank alignments: higher cd, then fewer Old cells left
/// unmatched, then more cells in hit columns, then less fragmented rows,
/// then fewer rows, then hit structure and row pattern ids in name order.
bool alignment_better(const ScoredAlignment& x, const ScoredAlignment& y);

/// Staged beam search for multiple alignments of `new_pattern` with
/// instances of the grammar's patterns. Each stage extends every retained
/// alignment by one Old pattern instance, for each of the best few
/// matchings of that pattern against the alignment's columns. Returns at
/// most max_alternatives alignments, best first, with probabilities.
/// Complete parses rank first, then other alignments with exactly one root
/// (see root_count); only alignments of the best of these tiers that was
/// found are returned.
///
/// An empty grammar yields an empty list. Throws CostError when a symbol of
/// the New pattern or the grammar has no cost.
std::vector<ScoredAlignment> build_alignments(const PatternPtr& new_pattern, const Grammar& g, const CostTable& t,
                                              const SearchParams& params);

/// A single-root alignment in which every New symbol and every Old contents
/// symbol is matched, so that its encoding decodes back to the New pattern.
bool complete_parse(const Alignment& a);

/// The alignments in which exactly one Old row is a root (its class symbol
/// is not unified with another Old row), in input order.
std::vector<ScoredAlignment> rooted(const std::vector<ScoredAlignment>& ranked);

/// Sum of the probabilities of the alignments that infer each symbol.
std::vector<std::pair<Symbol, double>> inference_probabilities(const std::vector<ScoredAlignment>& ranked);

/// Production: builds alignments for the code as a New pattern and reads
/// off the data symbols of the best one in column order. Throws DecodeError
/// if the code is not fully explained by any alignment.
std::vector<Symbol> decode(const std::vector<Symbol>& code, const Grammar& g, const CostTable& t,
                           const SearchParams& params);

}  // namespace spm
