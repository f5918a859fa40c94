#pragma once

#include <vector>

#include "spm/alignment.hpp"
#include "spm/costs.hpp"

namespace spm {

struct AlignmentScore {
  double b_new = 0;  // literal cost of New symbols in hit columns
  double b_enc = 0;  // cost of the encoding
  double cd = 0;     // b_new - b_enc
};

struct Encoding {
  std::vector<Symbol> symbols;
  std::vector<std::size_t> columns;  // column of each symbol in the source alignment
  double bits = 0;
};

/// ID symbols (head or tail) standing alone in their column, in column order.
Encoding derive_encoding(const Alignment& a, const CostTable& t);

/// Throws DataError if the alignment has no hit involving the New row and
/// CostError for an uncovered symbol.
AlignmentScore score_alignment(const Alignment& a, const CostTable& t);

/// Relative probabilities 2^cd / sum 2^cd, in input order.
std::vector<double> alignment_probabilities(const std::vector<double>& cds);

struct Completion {
  Symbol symbol;
  std::size_t column = 0;
};

/// Old contents symbols in singleton columns strictly between the first and
/// last New hit columns: material the alignment supplies but the New
/// pattern lacks.
std::vector<Completion> infer_completions(const Alignment& a);

}  // namespace spm
