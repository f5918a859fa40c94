#include "spm/coding.hpp"

#include <algorithm>
#include <cmath>

#include "spm/errors.hpp"

namespace spm {

Encoding derive_encoding(const Alignment& a, const CostTable& t) {
  Encoding e;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    if (a.is_hit(c)) continue;
    const Cell& cell = a.column(c).front();
    if (cell.row == 0 || !a.row(cell.row).is_id(cell.pos)) continue;
    Symbol s = a.symbol_at(cell);
    e.symbols.push_back(s);
    e.columns.push_back(c);
    e.bits += t.cost(s);
  }
  return e;
}

AlignmentScore score_alignment(const Alignment& a, const CostTable& t) {
  if (!a.has_new_hit()) throw DataError("cannot score an alignment without a hit on the New row");
  AlignmentScore s;
  for (std::size_t pos = 0; pos < a.new_row().size(); ++pos) {
    if (a.is_matched(0, pos)) s.b_new += t.literal(a.new_row()[pos]);
  }
  s.b_enc = derive_encoding(a, t).bits;
  s.cd = s.b_new - s.b_enc;
  return s;
}

std::vector<double> alignment_probabilities(const std::vector<double>& cds) {
  if (cds.empty()) return {};
  double top = *std::max_element(cds.begin(), cds.end());
  std::vector<double> p(cds.size());
  double sum = 0;
  for (std::size_t i = 0; i < cds.size(); ++i) sum += p[i] = std::exp2(cds[i] - top);
  for (double& x : p) x /= sum;
  return p;
}

std::vector<Completion> infer_completions(const Alignment& a) {
  std::size_t first = SIZE_MAX, last = 0;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    if (a.is_new_hit(c)) {
      first = std::min(first, c);
      last = c;
    }
  }
  std::vector<Completion> out;
  if (first == SIZE_MAX) return out;
  for (std::size_t c = first + 1; c < last; ++c) {
    if (a.is_hit(c)) continue;
    const Cell& cell = a.column(c).front();
    if (cell.row == 0 || a.row(cell.row).is_id(cell.pos)) continue;
    out.push_back({a.symbol_at(cell), c});
  }
  return out;
}

}  // namespace spm
