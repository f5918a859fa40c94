#include "spm/costs.hpp"

#include "spm/errors.hpp"

namespace spm {

CostTable::CostTable(CostModel model, std::unordered_map<Symbol, double> bits, double literal_factor)
    : model_(model), bits_(std::move(bits)), literal_factor_(literal_factor) {
  if (!(literal_factor > 0)) throw std::invalid_argument("literal factor must be positive");
  for (const auto& [s, b] : bits_) {
    if (!(b > 0)) throw std::invalid_argument("cost of '" + std::string(s.name()) + "' must be positive");
  }
}

double CostTable::cost(Symbol s) const {
  auto it = bits_.find(s);
  if (it == bits_.end()) throw CostError("no cost for symbol '" + std::string(s.name()) + "'");
  return it->second;
}

void CostTable::require(std::span<const Symbol> symbols) const {
  for (Symbol s : symbols) cost(s);
}

CostTable CostTable::scaled(double k) const {
  auto bits = bits_;
  for (auto& [s, b] : bits) b *= k;
  return CostTable(model_, std::move(bits), literal_factor_);
}

CostTable CostTable::with_literal_factor(double f) const { return CostTable(model_, bits_, f); }

CostTable symbol_costs(const Grammar& g, const Corpus& c, CostModel model, double literal_factor) {
  auto symbols = alphabet(g, c);
  std::unordered_map<Symbol, double> bits;
  if (model == CostModel::Unit) {
    for (Symbol s : symbols) bits[s] = 1.0;
    return CostTable(model, std::move(bits), literal_factor);
  }
  std::unordered_map<Symbol, double> count;
  for (Symbol s : symbols) count[s] = 1.0;
  for (const auto& p : g.patterns) {
    for (Symbol s : p->symbols()) count[s] += static_cast<double>(p->frequency());
  }
  double total = 0;
  for (Symbol s : symbols) total += count[s];
  for (const auto& [s, n] : count) bits[s] = -std::log2(n / total);
  // a one-symbol alphabet would cost zero bits
  if (bits.size() == 1) bits.begin()->second = 1.0;
  return CostTable(model, std::move(bits), literal_factor);
}

}  // namespace spm
