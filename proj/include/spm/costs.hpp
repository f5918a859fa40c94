#pragma once

#include <cmath>
#include <unordered_map>

#include "spm/grammar.hpp"

namespace spm {

/// Bit scores are compared with a relative tolerance of this size everywhere.
inline constexpr double kBitsEpsilon = 1e-9;

inline bool bits_equal(double a, double b) {
  return std::fabs(a - b) <= kBitsEpsilon * std::fmax(1.0, std::fmax(std::fabs(a), std::fabs(b)));
}
inline bool bits_less(double a, double b) { return a < b && !bits_equal(a, b); }

enum class CostModel { Unit, Frequency };

/// Per-symbol bit costs.
///
/// literal_factor scales the cost of symbols that are transmitted as raw
/// data rather than as codes: New symbols credited by a match, and data
/// symbols stored in a grammar. With a factor of 1 a raw symbol is worth
/// exactly one code symbol.
class CostTable {
 public:
  CostTable() = default;
  CostTable(CostModel model, std::unordered_map<Symbol, double> bits, double literal_factor = 1.0);

  CostModel model() const { return model_; }
  double literal_factor() const { return literal_factor_; }

  /// Throws CostError for a symbol with no entry.
  double cost(Symbol s) const;
  double literal(Symbol s) const { return literal_factor_ * cost(s); }
  bool covers(Symbol s) const { return bits_.count(s) != 0; }
  /// Throws CostError naming the first uncovered symbol.
  void require(std::span<const Symbol> symbols) const;
  std::size_t size() const { return bits_.size(); }

  CostTable scaled(double k) const;
  CostTable with_literal_factor(double f) const;

 private:
  CostModel model_ = CostModel::Unit;
  std::unordered_map<Symbol, double> bits_;
  double literal_factor_ = 1.0;
};

/// Unit model: 1 bit per distinct symbol. Frequency model: each symbol's
/// count is its number of occurrences in grammar patterns weighted by
/// pattern frequency; with add-one smoothing over the alphabet of g and c,
/// cost(s) = -log2((count(s)+1) / sum(count+1)).
CostTable symbol_costs(const Grammar& g, const Corpus& c, CostModel model, double literal_factor = 1.0);

}  // namespace spm
