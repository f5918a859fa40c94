#include "spm/render.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "spm/errors.hpp"

namespace spm {
namespace {

void put(std::string& line, std::size_t at, std::string_view s) {
  if (line.size() < at + s.size()) line.resize(at + s.size(), ' ');
  line.replace(at, s.size(), s);
}

std::string rstrip(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
  return s;
}

struct Token {
  std::size_t offset;
  std::string text;
};

std::vector<Token> tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back({i, std::string(line.substr(i, j - i))});
    i = j;
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) out.push_back(rstrip(line));
  return out;
}

bool only_dashes(const std::string& s) { return s.find_first_not_of('-') == std::string::npos; }

std::string render_columns(const Alignment& a) {
  std::vector<std::size_t> start(a.row_count());
  std::size_t at = 0;
  for (std::size_t r = 0; r < a.row_count(); ++r) {
    std::size_t w = std::to_string(r).size();
    for (Symbol s : a.row(r).symbols()) w = std::max(w, s.name().size());
    start[r] = at;
    at += w + 3;  // room for " - " between neighbours
  }
  std::string header;
  for (std::size_t r = 0; r < a.row_count(); ++r) put(header, start[r], std::to_string(r));

  std::string out = header + "\n\n";
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    std::vector<Cell> cells(a.column(c).begin(), a.column(c).end());
    std::sort(cells.begin(), cells.end());
    std::string line;
    std::size_t prev_end = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      auto name = a.symbol_at(cells[k]).name();
      std::size_t s = start[cells[k].row];
      if (k > 0) put(line, prev_end + 1, std::string(s - prev_end - 2, '-'));
      put(line, s, name);
      prev_end = s + name.size();
    }
    out += rstrip(line) + "\n";
  }
  out += "\n" + header + "\n";
  return out;
}

std::string render_rows(const Alignment& a) {
  std::size_t label_w = std::to_string(a.row_count() - 1).size() + 1;
  std::vector<std::size_t> start(a.column_count());
  std::size_t at = label_w;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    std::size_t w = 0;
    for (const Cell& cell : a.column(c)) w = std::max(w, a.symbol_at(cell).name().size());
    start[c] = at;
    at += w + 1;
  }

  // rows spanned by each column, for the '|' markers
  std::vector<std::pair<std::size_t, std::size_t>> span(a.column_count(), {SIZE_MAX, 0});
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    for (const Cell& cell : a.column(c)) {
      span[c].first = std::min(span[c].first, cell.row);
      span[c].second = std::max(span[c].second, cell.row);
    }
  }

  std::string out;
  for (std::size_t r = 0; r < a.row_count(); ++r) {
    if (r > 0) {
      std::string marks;
      for (std::size_t c = 0; c < a.column_count(); ++c) {
        if (span[c].first < r && span[c].second >= r) put(marks, start[c], "|");
      }
      if (!marks.empty()) out += rstrip(marks) + "\n";
    }
    std::string line;
    put(line, 0, std::to_string(r));
    for (std::size_t pos = 0; pos < a.row(r).size(); ++pos) put(line, start[a.column_of(r, pos)], a.row(r)[pos].name());
    put(line, at + 1, std::to_string(r));
    out += line + "\n";
  }
  return out;
}

Layout read_columns(const std::vector<std::string>& lines) {
  std::size_t h = 0;
  while (h < lines.size() && lines[h].empty()) ++h;
  if (h == lines.size()) throw DataError("layout has no header");
  const std::string& header = lines[h];
  Layout out;
  std::vector<std::size_t> starts;
  for (auto& t : tokens(header)) {
    starts.push_back(t.offset);
    out.labels.push_back(t.text);
  }
  out.rows.resize(starts.size());
  std::set<std::size_t> start_set(starts.begin(), starts.end());

  bool footer = false;
  for (std::size_t i = h + 1; i < lines.size(); ++i) {
    if (lines[i] == header) {
      footer = true;
      break;
    }
    auto toks = tokens(lines[i]);
    bool joined = false;
    for (auto& t : toks) {
      if (only_dashes(t.text) && !start_set.count(t.offset)) {
        if (out.columns.empty() || joined) throw DataError("stray connector in layout");
        joined = true;
        continue;
      }
      auto it = std::upper_bound(starts.begin(), starts.end(), t.offset);
      if (it == starts.begin()) throw DataError("symbol left of the first row in layout");
      std::size_t row = static_cast<std::size_t>(it - starts.begin()) - 1;
      if (!joined) out.columns.emplace_back();
      out.columns.back().push_back(Cell{row, out.rows[row].size()});
      out.rows[row].emplace_back(t.text);
      joined = false;
    }
    if (joined) throw DataError("connector with nothing to its right");
  }
  if (!footer) throw DataError("layout has no footer");
  return out;
}

Layout read_rows(const std::vector<std::string>& lines) {
  Layout out;
  std::map<std::size_t, std::size_t> active;  // offset -> column still joined downwards
  std::set<std::size_t> marks;
  std::vector<std::size_t> col_offset;
  bool pending_marks = false;
  for (const auto& line : lines) {
    if (line.empty()) continue;
    if (line.find_first_not_of(" |") == std::string::npos) {
      marks.clear();
      for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '|') marks.insert(i);
      }
      pending_marks = true;
      continue;
    }
    auto toks = tokens(line);
    if (toks.size() < 2 || toks.front().text != toks.back().text) {
      throw DataError("row line must start and end with the same label");
    }
    if (!pending_marks) marks.clear();
    pending_marks = false;
    for (auto it = active.begin(); it != active.end();) {
      it = marks.count(it->first) ? std::next(it) : active.erase(it);
    }
    std::size_t row = out.rows.size();
    out.labels.push_back(toks.front().text);
    out.rows.emplace_back();
    for (std::size_t k = 1; k + 1 < toks.size(); ++k) {
      std::size_t o = toks[k].offset;
      std::size_t col;
      if (auto it = active.find(o); it != active.end()) {
        col = it->second;
      } else {
        col = out.columns.size();
        out.columns.emplace_back();
        col_offset.push_back(o);
        active[o] = col;
      }
      out.columns[col].push_back(Cell{row, out.rows[row].size()});
      out.rows[row].emplace_back(toks[k].text);
    }
  }
  if (out.rows.empty()) throw DataError("layout has no rows");

  std::vector<std::size_t> order(out.columns.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (col_offset[x] != col_offset[y]) return col_offset[x] < col_offset[y];
    return out.columns[x].front().row < out.columns[y].front().row;
  });
  std::vector<std::vector<Cell>> sorted;
  for (auto i : order) sorted.push_back(std::move(out.columns[i]));
  out.columns = std::move(sorted);
  return out;
}

}  // namespace

std::string render(const Alignment& a, Orientation orientation) {
  return orientation == Orientation::Columns ? render_columns(a) : render_rows(a);
}

Layout read_layout(std::string_view text, Orientation orientation) {
  auto lines = split_lines(text);
  return orientation == Orientation::Columns ? read_columns(lines) : read_rows(lines);
}

std::vector<HitColumn> layout_hit_structure(const Layout& layout, const Grammar& g) {
  std::vector<std::string> label(layout.rows.size());
  for (std::size_t r = 0; r < layout.rows.size(); ++r) {
    if (r == 0) {
      label[r] = "NEW";
      continue;
    }
    for (const auto& p : g.patterns) {
      if (std::equal(p->symbols().begin(), p->symbols().end(), layout.rows[r].begin(), layout.rows[r].end())) {
        label[r] = p->id();
        break;
      }
    }
    if (label[r].empty()) throw DataError("layout row " + layout.labels[r] + " matches no pattern");
  }
  std::vector<HitColumn> out;
  for (const auto& col : layout.columns) {
    if (col.size() < 2) continue;
    HitColumn hc;
    for (const Cell& c : col) hc.emplace_back(label[c.row], c.pos);
    std::sort(hc.begin(), hc.end());
    out.push_back(std::move(hc));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spm
