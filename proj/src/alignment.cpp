#include "spm/alignment.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "spm/errors.hpp"

namespace spm {

Alignment Alignment::from_new(PatternPtr new_pattern) {
  Alignment a;
  a.instance_.push_back(0);
  for (std::size_t i = 0; i < new_pattern->size(); ++i) {
    a.cells_.push_back(Cell{0, i});
    a.col_start_.push_back(a.cells_.size());
  }
  a.rows_.push_back(std::move(new_pattern));
  a.rebuild_placement();
  return a;
}

Alignment Alignment::from_columns(PatternPtr new_pattern, std::vector<std::pair<RowRef, PatternPtr>> old_rows,
                                  std::vector<std::vector<Cell>> columns) {
  Alignment a;
  a.instance_.push_back(0);
  a.rows_.push_back(std::move(new_pattern));
  for (auto& [ref, p] : old_rows) {
    // the row reference's id is the pattern's own id
    a.instance_.push_back(ref.instance);
    a.rows_.push_back(std::move(p));
  }
  for (const auto& col : columns) {
    a.cells_.insert(a.cells_.end(), col.begin(), col.end());
    a.col_start_.push_back(a.cells_.size());
  }
  a.rebuild_placement();
  return a;
}

void Alignment::rebuild_placement() {
  row_start_.assign(rows_.size() + 1, 0);
  for (std::size_t r = 0; r < rows_.size(); ++r) row_start_[r + 1] = row_start_[r] + rows_[r]->size();
  placement_.assign(row_start_.back(), SIZE_MAX);
  for (std::size_t c = 0; c + 1 < col_start_.size(); ++c) {
    for (std::size_t k = col_start_[c]; k < col_start_[c + 1]; ++k) {
      const Cell& cell = cells_[k];
      if (cell.row < rows_.size() && cell.pos < rows_[cell.row]->size()) placement_[row_start_[cell.row] + cell.pos] = c;
    }
  }
}

bool Alignment::has_cell_of_row(std::size_t c, std::size_t row) const {
  for (const Cell& cell : column(c)) {
    if (cell.row == row) return true;
  }
  return false;
}

bool Alignment::has_new_hit() const {
  for (std::size_t pos = 0; pos < rows_[0]->size(); ++pos) {
    if (is_hit(column_of(0, pos))) return true;
  }
  return false;
}

std::size_t Alignment::instances_of(const std::string& pattern_id) const {
  std::size_t n = 0;
  for (std::size_t r = 1; r < rows_.size(); ++r) n += rows_[r]->id() == pattern_id;
  return n;
}

std::vector<DynBitset> Alignment::column_ancestors() const {
  const std::size_t n = column_count();
  std::vector<DynBitset> anc(n, DynBitset(n));
  // columns are stored in a topological order, so predecessors are final
  for (std::size_t c = 0; c < n; ++c) {
    for (const Cell& cell : column(c)) {
      if (cell.pos == 0) continue;
      std::size_t p = column_of(cell.row, cell.pos - 1);
      anc[c] |= anc[p];
      anc[c].set(p);
    }
  }
  return anc;
}

std::size_t Alignment::hit_cells() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < column_count(); ++c) {
    if (is_hit(c)) n += column_size(c);
  }
  return n;
}

std::size_t Alignment::loose_old_cells() const {
  std::size_t n = 0;
  for (std::size_t c = 0; c < column_count(); ++c) n += column_size(c) == 1 && cells_[col_start_[c]].row != 0;
  return n;
}

std::size_t Alignment::fragmentation() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    bool in_run = false;
    for (std::size_t pos = 0; pos < rows_[r]->size(); ++pos) {
      bool hit = is_hit(column_of(r, pos));
      if (hit && !in_run) ++n;
      in_run = hit;
    }
  }
  return n;
}

namespace {

std::string row_label(const Alignment& a, std::size_t row) { return row == 0 ? "NEW" : a.row(row).id(); }

}  // namespace

std::vector<HitColumn> hit_structure(const Alignment& a) {
  std::vector<HitColumn> out;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    if (!a.is_hit(c)) continue;
    HitColumn col;
    for (const Cell& cell : a.column(c)) col.emplace_back(row_label(a, cell.row), cell.pos);
    std::sort(col.begin(), col.end());
    out.push_back(std::move(col));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string Alignment::signature() const {
  std::string sig;
  for (const auto& col : hit_structure(*this)) {
    sig += '[';
    for (const auto& [id, pos] : col) {
      sig += id;
      sig += '@';
      sig += std::to_string(pos);
      sig += ';';
    }
    sig += ']';
  }
  std::vector<std::string> ids;
  for (std::size_t r = 1; r < rows_.size(); ++r) ids.push_back(rows_[r]->id());
  std::sort(ids.begin(), ids.end());
  sig += '{';
  for (const auto& id : ids) {
    sig += id;
    sig += ';';
  }
  sig += '}';
  return sig;
}

std::size_t root_count(const Alignment& a) {
  std::size_t roots = 0;
  for (std::size_t r = 1; r < a.row_count(); ++r) {
    bool bound = false;
    for (const Cell& cell : a.column(a.column_of(r, 0))) bound |= cell.row != 0 && cell.row != r;
    roots += !bound;
  }
  return roots;
}

Alignment merge(const Alignment& base, const RowRef& ref, const PatternPtr& pattern, const MatchSet& ms) {
  if (ms.pairs.empty()) throw AlignmentError("empty match: the new row must share at least one hit");
  for (std::size_t r = 1; r < base.row_count(); ++r) {
    if (base.instance(r) == ref.instance && base.row(r).id() == ref.pattern_id) {
      throw AlignmentError("row " + ref.pattern_id + "#" + std::to_string(ref.instance) + " is already placed");
    }
  }
  if (ref.instance != base.instances_of(ref.pattern_id)) {
    throw AlignmentError("instance numbers of " + ref.pattern_id + " must be contiguous");
  }
  const Pattern& p = *pattern;
  std::vector<std::size_t> matched_col(p.size(), SIZE_MAX);
  std::vector<bool> used(base.column_count(), false);
  for (std::size_t k = 0; k < ms.pairs.size(); ++k) {
    auto [col, pos] = ms.pairs[k];
    if (col >= base.column_count() || pos >= p.size()) throw AlignmentError("match pair out of range");
    if (k > 0 && pos <= ms.pairs[k - 1].second) throw AlignmentError("match positions must increase");
    if (!(base.column_symbol(col) == p[pos])) throw AlignmentError("match joins unequal symbols");
    if (used[col]) throw AlignmentError("duplicate placement: two symbols in one column");
    used[col] = true;
    matched_col[pos] = col;
  }

  // Nodes: base columns 0..B-1, then one node per unmatched pattern position.
  const std::size_t B = base.column_count();
  const std::size_t new_row = base.row_count();
  std::vector<std::size_t> node_of(p.size());
  std::vector<std::size_t> node_pos;  // pattern position for fresh nodes
  for (std::size_t pos = 0; pos < p.size(); ++pos) {
    if (matched_col[pos] != SIZE_MAX) {
      node_of[pos] = matched_col[pos];
    } else {
      node_of[pos] = B + node_pos.size();
      node_pos.push_back(pos);
    }
  }
  const std::size_t N = B + node_pos.size();

  // Priority keys: base column c keeps (2c+1); a fresh cell sits just before
  // its next anchor (2c) or, past the last anchor, just after it (2c+2).
  std::vector<std::pair<std::size_t, std::size_t>> key(N);
  for (std::size_t c = 0; c < B; ++c) key[c] = {2 * c + 1, 0};
  for (std::size_t k = 0; k < node_pos.size(); ++k) {
    std::size_t pos = node_pos[k];
    std::size_t next = SIZE_MAX, prev = SIZE_MAX;
    for (std::size_t q = pos + 1; q < p.size() && next == SIZE_MAX; ++q) next = matched_col[q];
    for (std::size_t q = pos; q-- > 0 && prev == SIZE_MAX;) prev = matched_col[q];
    key[B + k] = next != SIZE_MAX ? std::pair{2 * next, pos} : std::pair{2 * prev + 2, pos};
  }

  std::vector<std::size_t> order;
  order.reserve(N);
  bool in_base_order = true;
  for (std::size_t k = 1; k < ms.pairs.size(); ++k) in_base_order &= ms.pairs[k].first > ms.pairs[k - 1].first;

  if (in_base_order) {
    // base order already satisfies every row; fresh cells slot in by key
    std::size_t k = 0;
    for (std::size_t c = 0; c <= B; ++c) {
      while (k < node_pos.size() && key[B + k].first == 2 * c) order.push_back(B + k++);
      if (c < B) order.push_back(c);
    }
  } else {
    // Kahn's algorithm over all row chains, smallest key first
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    edges.reserve(base.cells_.size() + p.size());
    for (std::size_t r = 0; r < base.row_count(); ++r) {
      for (std::size_t pos = 1; pos < base.row(r).size(); ++pos) {
        edges.emplace_back(base.column_of(r, pos - 1), base.column_of(r, pos));
      }
    }
    for (std::size_t pos = 1; pos < p.size(); ++pos) edges.emplace_back(node_of[pos - 1], node_of[pos]);
    std::vector<std::size_t> first(N + 1, 0), succ(edges.size()), indeg(N, 0);
    for (auto& [u, v] : edges) {
      ++first[u + 1];
      ++indeg[v];
    }
    for (std::size_t v = 0; v < N; ++v) first[v + 1] += first[v];
    std::vector<std::size_t> fill(first.begin(), first.end() - 1);
    for (auto& [u, v] : edges) succ[fill[u]++] = v;

    using Item = std::pair<std::pair<std::size_t, std::size_t>, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
    for (std::size_t v = 0; v < N; ++v) {
      if (indeg[v] == 0) ready.push({key[v], v});
    }
    while (!ready.empty()) {
      auto v = ready.top().second;
      ready.pop();
      order.push_back(v);
      for (std::size_t e = first[v]; e < first[v + 1]; ++e) {
        if (--indeg[succ[e]] == 0) ready.push({key[succ[e]], succ[e]});
      }
    }
  }
  if (order.size() != N) throw AlignmentError("ordering conflict: the match crosses existing columns");

  std::vector<std::size_t> added(N, SIZE_MAX);  // pattern position landing in each node
  for (std::size_t pos = 0; pos < p.size(); ++pos) added[node_of[pos]] = pos;

  Alignment out;
  out.rows_ = base.rows_;
  out.instance_ = base.instance_;
  out.rows_.push_back(pattern);
  out.instance_.push_back(ref.instance);
  out.cells_.reserve(base.cells_.size() + p.size());
  out.col_start_.reserve(N + 1);
  for (auto v : order) {
    if (v < B) {
      auto col = base.column(v);
      out.cells_.insert(out.cells_.end(), col.begin(), col.end());
    }
    if (added[v] != SIZE_MAX) out.cells_.push_back(Cell{new_row, added[v]});
    out.col_start_.push_back(out.cells_.size());
  }
  out.rebuild_placement();
  if (!out.has_new_hit()) throw AlignmentError("alignment has no hit involving the New row");
  return out;
}

std::vector<Diagnostic> validate_alignment(const Alignment& a) {
  std::vector<Diagnostic> out;
  auto where = [&](std::size_t row) { return "row " + std::to_string(row); };

  std::vector<std::vector<std::size_t>> seen(a.row_count());
  for (std::size_t r = 0; r < a.row_count(); ++r) seen[r].assign(a.row(r).size(), 0);
  std::vector<std::vector<std::size_t>> col_of(a.row_count());
  for (std::size_t r = 0; r < a.row_count(); ++r) col_of[r].assign(a.row(r).size(), SIZE_MAX);

  for (std::size_t c = 0; c < a.column_count(); ++c) {
    const auto& col = a.column(c);
    std::string subject = "column " + std::to_string(c);
    if (col.empty()) {
      out.push_back({subject, "empty column"});
      continue;
    }
    std::set<std::size_t> rows_here;
    bool bad_cell = false;
    for (const Cell& cell : col) {
      if (cell.row >= a.row_count() || cell.pos >= a.row(cell.row).size()) {
        out.push_back({subject, "cell out of range"});
        bad_cell = true;
        continue;
      }
      ++seen[cell.row][cell.pos];
      col_of[cell.row][cell.pos] = c;
      if (!rows_here.insert(cell.row).second) out.push_back({subject, "two cells from " + where(cell.row)});
    }
    if (bad_cell) continue;
    Symbol s = a.symbol_at(col.front());
    for (const Cell& cell : col) {
      if (!(a.symbol_at(cell) == s)) {
        out.push_back({subject, "unequal symbols '" + std::string(s.name()) + "' and '" +
                                    std::string(a.symbol_at(cell).name()) + "'"});
        break;
      }
    }
  }

  for (std::size_t r = 0; r < a.row_count(); ++r) {
    bool crossing = false;
    for (std::size_t pos = 0; pos < seen[r].size(); ++pos) {
      if (seen[r][pos] != 1) {
        out.push_back({where(r), "position " + std::to_string(pos) + " placed " + std::to_string(seen[r][pos]) +
                                     " times"});
      }
      if (pos > 0 && col_of[r][pos] != SIZE_MAX && col_of[r][pos - 1] != SIZE_MAX &&
          col_of[r][pos] <= col_of[r][pos - 1]) {
        crossing = true;
      }
    }
    if (crossing) out.push_back({where(r), "columns not increasing along the row"});
  }

  std::map<std::string, std::set<std::size_t>> instances;
  for (std::size_t r = 1; r < a.row_count(); ++r) {
    if (a.row(r).role() != Role::Old) out.push_back({where(r), "row is not an Old pattern"});
    if (!instances[a.ref(r).pattern_id].insert(a.ref(r).instance).second) {
      out.push_back({where(r), "duplicate row reference"});
    }
  }
  for (const auto& [id, inst] : instances) {
    if (*inst.rbegin() + 1 != inst.size()) out.push_back({id, "instance numbers are not contiguous from 0"});
  }

  bool new_hit = false;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    if (a.column(c).size() < 2) continue;
    for (const Cell& cell : a.column(c)) new_hit |= cell.row == 0;
  }
  if (!new_hit) out.push_back({"alignment", "no hit column involves the New row"});
  return out;
}

}  // namespace spm
