#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spmtest {

using namespace spm;

std::string fixture(const std::string& relative) { return std::string(SPM_FIXTURES) + "/" + relative; }

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

double hcs_weight(std::span<const Symbol> a, std::span<const Symbol> b, const CostTable& t) {
  std::map<std::pair<std::size_t, std::size_t>, double> memo;
  // w(i, j): best over the first i symbols of a and first j of b
  std::function<double(std::size_t, std::size_t)> w = [&](std::size_t i, std::size_t j) -> double {
    if (i == 0 || j == 0) return 0.0;
    if (auto it = memo.find({i, j}); it != memo.end()) return it->second;
    double v = std::max(w(i - 1, j), w(i, j - 1));
    if (a[i - 1] == b[j - 1]) v = std::max(v, w(i - 1, j - 1) + t.cost(a[i - 1]));
    memo[{i, j}] = v;
    return v;
  };
  return w(a.size(), b.size());
}

double brute_hcs_weight(std::span<const Symbol> a, std::span<const Symbol> b, const CostTable& t) {
  double best = 0;
  std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t i, std::size_t j, double acc) {
    best = std::max(best, acc);
    for (std::size_t x = i; x < a.size(); ++x) {
      for (std::size_t y = j; y < b.size(); ++y) {
        if (a[x] == b[y]) go(x + 1, y + 1, acc + t.cost(a[x]));
      }
    }
  };
  go(0, 0, 0);
  return best;
}

Bits score_oracle(const Alignment& a, const CostTable& t) {
  Bits out;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    auto cells = a.column(c);
    if (cells.size() >= 2) {
      for (const auto& cell : cells) {
        if (cell.row == 0) out.b_new += t.literal_factor() * t.cost(a.row(0)[cell.pos]);
      }
      continue;
    }
    const auto& cell = cells.front();
    if (cell.row == 0) continue;
    const Pattern& p = a.row(cell.row);
    bool in_head = cell.pos < p.head().size();
    bool in_tail = cell.pos >= p.size() - p.tail().size();
    if (in_head || in_tail) out.b_enc += t.cost(p[cell.pos]);
  }
  return out;
}

std::vector<Symbol> random_sequence(Rng& rng, std::size_t alphabet, std::size_t length) {
  std::uniform_int_distribution<std::size_t> pick(0, alphabet - 1);
  std::vector<Symbol> out;
  for (std::size_t i = 0; i < length; ++i) out.emplace_back("s" + std::to_string(pick(rng)));
  return out;
}

namespace {

std::string random_word(Rng& rng, std::size_t min_len, std::size_t max_len, const std::string& letters) {
  std::uniform_int_distribution<std::size_t> len(min_len, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
  std::string w;
  for (std::size_t i = len(rng); i > 0; --i) w += letters[pick(rng)];
  return w;
}

std::string spaced(const std::string& w) {
  std::string out;
  for (char ch : w) {
    if (!out.empty()) out += ' ';
    out += ch;
  }
  return out;
}

}  // namespace

ParseCase random_parse_case(Rng& rng) {
  std::uniform_int_distribution<std::size_t> slots(2, 3), members(1, 3);
  ParseCase pc;
  std::set<std::string> used;
  std::string top_contents, news;
  std::vector<std::string> chosen;
  std::size_t n_slots = slots(rng);
  for (std::size_t k = 0; k < n_slots; ++k) {
    std::string cls = "K" + std::to_string(k);
    top_contents += (k ? " " : "") + cls + " #" + cls;
    std::size_t n_members = members(rng);
    std::uniform_int_distribution<std::size_t> which(1, n_members);
    std::size_t pick = which(rng);
    for (std::size_t m = 1; m <= n_members; ++m) {
      std::string w;
      do {
        w = random_word(rng, 2, 4, "abcdef");
      } while (!used.insert(w).second);
      pc.grammar.patterns.push_back(old_pattern(cls + " " + std::to_string(m), spaced(w), "#" + cls));
      if (m == pick) {
        news += (news.empty() ? "" : " ") + spaced(w);
        chosen.push_back(std::to_string(m));
      }
    }
  }
  pc.grammar.patterns.insert(pc.grammar.patterns.begin(), old_pattern("T 1", top_contents, "#T"));
  pc.new_pattern = new_pattern(news);
  pc.code = make_symbols("T 1");
  for (const auto& d : chosen) pc.code.emplace_back(d);
  pc.code.emplace_back("#T");
  return pc;
}

Corpus random_corpus(Rng& rng) {
  const std::string letters = "abcdefgh";
  std::uniform_int_distribution<std::size_t> count(2, 3), coin(0, 1);
  std::string prefix = random_word(rng, 2, 3, letters);
  std::string suffix = random_word(rng, 2, 3, letters);
  Corpus c;
  for (std::size_t k = count(rng); k > 0; --k) {
    std::string s = random_word(rng, 1, 3, letters);
    std::string text = spaced(prefix) + " " + spaced(s);
    if (coin(rng)) text += " " + spaced(suffix);
    add_new(c, make_symbols(text));
  }
  return c;
}

const std::vector<FigureCase>& figure_cases() {
  static const std::vector<FigureCase> cases = {
      {"parsing", "parsing.sp", 0, {"parsing.txt"}, Orientation::Columns},
      {"recursion", "recursion.sp", 0, {"recursion.txt"}, Orientation::Columns},
      {"errors (a)", "errors.sp", 0, {"errors_a.txt"}, Orientation::Rows},
      {"errors (b)", "errors.sp", 1, {"errors_b.txt"}, Orientation::Rows},
      {"errors (c)", "errors.sp", 2, {"errors_c.txt"}, Orientation::Rows},
      {"class inclusion", "class_inclusion.sp", 0, {"class_inclusion.txt"}, Orientation::Columns},
      {"part-whole", "part_whole.sp", 0, {"part_whole.txt"}, Orientation::Columns},
      {"occlusion (a)", "occlusion_a.sp", 0, {"occlusion_a.txt"}, Orientation::Rows},
      {"occlusion (b)", "occlusion_b.sp", 0, {"occlusion_b.txt"}, Orientation::Rows},
      {"kanizsa", "kanizsa.sp", 0, {"kanizsa.txt"}, Orientation::Columns},
      {"planning", "planning.sp", 0, {"planning_a.txt", "planning_b.txt"}, Orientation::Columns},
      {"learning pair", "learning_pair.sp", 0, {"learning.txt"}, Orientation::Rows},
  };
  return cases;
}

CostTable figure_costs(const PatternFile& f) { return symbol_costs(f.grammar, f.corpus, CostModel::Frequency, 8.0); }

std::string check_figure(const FigureCase& fc, const SearchParams& params) {
  auto f = load_pattern_file(fixture("grammars/" + fc.grammar));
  if (fc.new_index >= f.corpus.size()) return "fixture has no New pattern " + std::to_string(fc.new_index);
  auto ranked = build_alignments(f.corpus.news[fc.new_index], f.grammar, figure_costs(f), params);
  if (ranked.empty()) return "no alignment";
  for (const auto& layout_file : fc.layouts) {
    auto layout = read_layout(read_text(fixture("figures/" + layout_file)), fc.orientation);
    auto expected = layout_hit_structure(layout, f.grammar);
    if (fc.layouts.size() == 1) {
      if (hit_structure(ranked.front().alignment) != expected) return "best alignment differs from " + layout_file;
      continue;
    }
    bool found = std::any_of(ranked.begin(), ranked.end(),
                             [&](const ScoredAlignment& sa) { return hit_structure(sa.alignment) == expected; });
    if (!found) return layout_file + " is not among the returned alignments";
  }
  return {};
}

PatternPtr old_pattern(const std::string& head, const std::string& contents, const std::string& tail,
                       std::uint64_t freq) {
  return std::make_shared<const Pattern>(
      Pattern::make_old("", make_symbols(head), make_symbols(contents), make_symbols(tail), freq));
}

PatternPtr new_pattern(const std::string& text, const std::string& id) {
  return std::make_shared<const Pattern>(Pattern::make_new(id, make_symbols(text)));
}

Grammar grammar_of(std::initializer_list<PatternPtr> patterns) {
  Grammar g;
  g.patterns.assign(patterns.begin(), patterns.end());
  return g;
}

}  // namespace spmtest
