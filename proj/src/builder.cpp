#include "spm/builder.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "spm/errors.hpp"
#include "spm/parallel.hpp"

namespace spm {
namespace {

// Nudges the matcher towards unifying more cells among otherwise equal
// matchings; far below any cost difference that matters for ranking.
constexpr double kUnifyBonus = 1e-6;

// Matchings tried per (alignment, pattern) pair and the matcher's own beam.
std::size_t matchings_per_pattern(const SearchParams& p) { return std::max<std::size_t>(2, p.depth); }
std::size_t inner_beam(const SearchParams& p) { return std::min<std::size_t>(p.beam_width, 48); }

// Integer form of (hit_structure, sorted row ids): labels are ranks of
// pattern ids in name order, so comparing keys compares names.
using StructureKey = std::vector<std::uint64_t>;

struct StructureKeyHash {
  std::size_t operator()(const StructureKey& k) const {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (auto v : k) h = (h ^ v) * 0x100000001b3ULL;
    return h;
  }
};

class LabelRanks {
 public:
  explicit LabelRanks(const Grammar& g) {
    std::vector<std::pair<std::string, const Pattern*>> named;
    for (const auto& p : g.patterns) named.emplace_back(p->id(), p.get());
    named.emplace_back("NEW", nullptr);
    std::stable_sort(named.begin(), named.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 0; i < named.size(); ++i) rank_[named[i].second] = i + 1;
  }
  std::uint64_t of(const Pattern* p) const { return rank_.at(p); }

 private:
  std::unordered_map<const Pattern*, std::uint64_t> rank_;
};

StructureKey structure_key(const Alignment& a, const LabelRanks& ranks) {
  std::vector<std::uint64_t> labels;
  std::vector<std::pair<std::size_t, std::size_t>> cols;  // (start, length) in labels
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    if (!a.is_hit(c)) continue;
    std::size_t start = labels.size();
    for (const Cell& cell : a.column(c)) {
      labels.push_back(ranks.of(cell.row == 0 ? nullptr : a.row_ptr(cell.row).get()) << 32 | cell.pos);
    }
    std::sort(labels.begin() + static_cast<std::ptrdiff_t>(start), labels.end());
    cols.emplace_back(start, labels.size() - start);
  }
  auto span_of = [&](const std::pair<std::size_t, std::size_t>& c) {
    return std::span<const std::uint64_t>(labels).subspan(c.first, c.second);
  };
  std::sort(cols.begin(), cols.end(), [&](const auto& x, const auto& y) {
    auto sx = span_of(x), sy = span_of(y);
    return std::lexicographical_compare(sx.begin(), sx.end(), sy.begin(), sy.end());
  });
  StructureKey key;
  key.reserve(labels.size() + cols.size() + a.row_count() + 1);
  for (const auto& c : cols) {
    auto sc = span_of(c);
    key.insert(key.end(), sc.begin(), sc.end());
    key.push_back(0);  // terminators sort below every label
  }
  key.push_back(0);
  std::size_t rows_at = key.size();
  for (std::size_t r = 1; r < a.row_count(); ++r) key.push_back(ranks.of(a.row_ptr(r).get()));
  std::sort(key.begin() + static_cast<std::ptrdiff_t>(rows_at), key.end());
  return key;
}

struct Ranked {
  ScoredAlignment sa;
  int tier = 0;  // 2 complete parse, 1 single root, 0 otherwise
  std::size_t roots = 0;
  std::size_t loose_old = 0;
  std::size_t hit_cells = 0;
  std::size_t fragmentation = 0;
  StructureKey key;
};

Ranked make_ranked(Alignment a, const CostTable& t, const LabelRanks& ranks) {
  Ranked r{{std::move(a), {}, 0}, 0, 0, 0, 0, 0, {}};
  r.sa.score = score_alignment(r.sa.alignment, t);
  r.roots = root_count(r.sa.alignment);
  r.tier = r.roots != 1 ? 0 : complete_parse(r.sa.alignment) ? 2 : 1;
  r.loose_old = r.sa.alignment.loose_old_cells();
  r.hit_cells = r.sa.alignment.hit_cells();
  r.fragmentation = r.sa.alignment.fragmentation();
  r.key = structure_key(r.sa.alignment, ranks);
  return r;
}

bool ranked_better(const Ranked& x, const Ranked& y) {
  if (!bits_equal(x.sa.score.cd, y.sa.score.cd)) return x.sa.score.cd > y.sa.score.cd;
  if (x.loose_old != y.loose_old) return x.loose_old < y.loose_old;
  if (x.hit_cells != y.hit_cells) return x.hit_cells > y.hit_cells;
  if (x.fragmentation != y.fragmentation) return x.fragmentation < y.fragmentation;
  if (x.sa.alignment.row_count() != y.sa.alignment.row_count()) {
    return x.sa.alignment.row_count() < y.sa.alignment.row_count();
  }
  return x.key < y.key;
}

// Results: complete parses first, then other single-root alignments.
bool result_better(const Ranked& x, const Ranked& y) {
  if (x.tier != y.tier) return x.tier > y.tier;
  return ranked_better(x, y);
}

// Alignments covering the same New positions with the same number of roots
// compete with each other first: the beam takes the best of every group,
// then the second best, and so on, so that one crowded region of the space
// cannot fill it.
std::vector<Alignment> select_beam(const std::vector<Ranked>& sorted, std::size_t width) {
  std::unordered_map<DynBitset, std::size_t, DynBitsetHash> seen_in_group;
  std::vector<std::pair<std::size_t, std::size_t>> order;  // (rank in group, index)
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const Alignment& a = sorted[i].sa.alignment;
    const std::size_t n = a.new_row().size();
    DynBitset cover(n + sorted[i].roots + 1);
    for (std::size_t pos = 0; pos < n; ++pos) {
      if (a.is_matched(0, pos)) cover.set(pos);
    }
    cover.set(n + sorted[i].roots);
    order.emplace_back(seen_in_group[cover]++, i);
  }
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Alignment> beam;
  for (std::size_t k = 0; k < order.size() && k < width; ++k) beam.push_back(sorted[order[k].second].sa.alignment);
  return beam;
}

// True when some Old row has its head unified with a reference in one row
// and its tail with a reference in another, so the two do not nest.
bool crossed_references(const Alignment& a) {
  auto referrer = [&](std::size_t r, std::size_t pos) -> std::size_t {
    for (const Cell& cell : a.column(a.column_of(r, pos))) {
      if (cell.row != 0 && cell.row != r && a.row(cell.row).segment(cell.pos) == Segment::Contents) return cell.row;
    }
    return 0;
  };
  for (std::size_t r = 1; r < a.row_count(); ++r) {
    const Pattern& p = a.row(r);
    if (p.tail().empty()) continue;
    std::size_t head = referrer(r, 0), tail = referrer(r, p.size() - 1);
    if (head != 0 && tail != 0 && head != tail) return true;
  }
  return false;
}

std::vector<Alignment> expand(const Alignment& a, const Grammar& g, const std::unordered_set<Symbol>& refs,
                              const CostTable& t, const SearchParams& params) {
  const std::size_t cols = a.column_count();
  const std::size_t cap = params.depth * 4;
  auto anc = a.column_ancestors();

  std::vector<double> gain(cols, 0.0);
  std::vector<bool> new_col(cols, false);
  for (std::size_t c = 0; c < cols; ++c) {
    new_col[c] = a.has_cell_of_row(c, 0);
    if (a.is_hit(c)) continue;
    const Cell& cell = a.column(c).front();
    Symbol s = a.symbol_at(cell);
    if (cell.row == 0) {
      gain[c] = t.literal(s);
    } else if (a.row(cell.row).is_id(cell.pos)) {
      gain[c] = t.cost(s);
    }
  }

  MatchTarget target;
  target.symbols.reserve(cols);
  for (std::size_t c = 0; c < cols; ++c) target.symbols.push_back(a.column_symbol(c));
  target.before = std::move(anc);

  SearchParams sub = params;
  sub.beam_width = inner_beam(params);
  sub.max_alternatives = std::min(matchings_per_pattern(params), sub.beam_width);

  const bool had_new_hit = a.has_new_hit();
  std::vector<Alignment> out;
  for (const auto& pp : g.patterns) {
    const Pattern& p = *pp;
    if (a.instances_of(p.id()) >= cap) continue;
    // A column may not hold the same position of the same pattern twice, and
    // two Old rows may not unify head with head or tail with tail: an ID
    // symbol is unified with a reference to it, not with another pattern's ID.
    // Likewise two references in contents do not unify with each other.
    target.blocked = [&](std::size_t slot, std::size_t pos) {
      const Segment seg = p.segment(pos);
      const bool is_ref = seg == Segment::Contents && refs.count(p[pos]) != 0;
      for (const Cell& cell : a.column(slot)) {
        if (cell.row == 0) continue;
        if (cell.pos == pos && a.row_ptr(cell.row).get() == pp.get()) return true;
        const Segment other = a.row(cell.row).segment(cell.pos);
        if (seg != Segment::Contents && other == seg) return true;
        if (is_ref && other == Segment::Contents) return true;
      }
      return false;
    };
    target.weight = [&](std::size_t slot, std::size_t pos) {
      return gain[slot] + (p.is_id(pos) ? t.cost(p[pos]) : 0.0) + kUnifyBonus;
    };
    for (const MatchSet& ms : staged_match(target, p.symbols(), sub)) {
      if (!had_new_hit &&
          std::none_of(ms.pairs.begin(), ms.pairs.end(), [&](const auto& pr) { return new_col[pr.first]; })) {
        continue;
      }
      try {
        auto child = merge(a, a.next_ref(p), pp, ms);
        if (!crossed_references(child)) out.push_back(std::move(child));
      } catch (const AlignmentError&) {
        // the matcher respects column order, so this only guards invariants
      }
    }
  }
  return out;
}

}  // namespace

bool alignment_better(const ScoredAlignment& x, const ScoredAlignment& y) {
  const Alignment& a = x.alignment;
  const Alignment& b = y.alignment;
  if (!bits_equal(x.score.cd, y.score.cd)) return x.score.cd > y.score.cd;
  if (a.loose_old_cells() != b.loose_old_cells()) return a.loose_old_cells() < b.loose_old_cells();
  if (a.hit_cells() != b.hit_cells()) return a.hit_cells() > b.hit_cells();
  if (a.fragmentation() != b.fragmentation()) return a.fragmentation() < b.fragmentation();
  if (a.row_count() != b.row_count()) return a.row_count() < b.row_count();
  auto ids = [](const Alignment& al) {
    std::vector<std::string> out;
    for (std::size_t r = 1; r < al.row_count(); ++r) out.push_back(al.row(r).id());
    std::sort(out.begin(), out.end());
    return out;
  };
  return std::pair(hit_structure(a), ids(a)) < std::pair(hit_structure(b), ids(b));
}

std::vector<ScoredAlignment> build_alignments(const PatternPtr& new_pattern, const Grammar& g, const CostTable& t,
                                              const SearchParams& params) {
  params.validate();
  if (new_pattern->role() != Role::New) throw DataError("alignments are built for a New pattern");
  t.require(new_pattern->symbols());
  for (const auto& p : g.patterns) t.require(p->symbols());
  if (g.empty()) return {};

  std::vector<Alignment> beam{Alignment::from_new(new_pattern)};
  const LabelRanks ranks(g);
  const auto refs = id_symbols(g);
  std::unordered_set<StructureKey, StructureKeyHash> seen;
  std::vector<Ranked> results;
  const std::size_t keep = std::max(params.beam_width, params.max_alternatives);
  const std::size_t max_stages = params.depth * 4 * g.size() + 1;
  std::size_t stall = 0;
  std::optional<Ranked> best_any;

  for (std::size_t stage = 0; stage < max_stages && !beam.empty(); ++stage) {
    std::vector<std::vector<Ranked>> grown(beam.size());
    parallel_for(beam.size(), [&](std::size_t i) {
      for (auto& child : expand(beam[i], g, refs, t, params)) grown[i].push_back(make_ranked(std::move(child), t, ranks));
    });

    std::vector<Ranked> fresh;
    for (auto& list : grown) {
      for (auto& r : list) {
        if (seen.insert(r.key).second) fresh.push_back(std::move(r));
      }
    }
    std::sort(fresh.begin(), fresh.end(), ranked_better);

    beam = select_beam(fresh, params.beam_width);

    // progress is either a better partial alignment or a better complete parse
    bool improved = false;
    if (!fresh.empty() && (!best_any || ranked_better(fresh.front(), *best_any))) {
      best_any = fresh.front();
      improved = true;
    }
    auto fresh_best = std::min_element(fresh.begin(), fresh.end(), result_better);
    improved |= fresh_best != fresh.end() && (results.empty() || result_better(*fresh_best, results.front()));
    stall = improved ? 0 : stall + 1;
    for (auto& r : fresh) results.push_back(std::move(r));
    std::sort(results.begin(), results.end(), result_better);
    if (results.size() > keep) results.resize(keep);

    if (stall > params.depth) break;
  }

  // Only alignments of the best tier found are reported.
  if (!results.empty() && results.front().tier > 0) {
    int top = results.front().tier;
    results.erase(std::find_if(results.begin(), results.end(), [top](const Ranked& r) { return r.tier < top; }),
                  results.end());
  }
  if (results.size() > params.max_alternatives) results.resize(params.max_alternatives);
  std::vector<double> cds;
  for (const auto& r : results) cds.push_back(r.sa.score.cd);
  auto probs = alignment_probabilities(cds);
  std::vector<ScoredAlignment> out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    out.push_back(std::move(results[i].sa));
    out.back().probability = probs[i];
  }
  return out;
}

bool complete_parse(const Alignment& a) {
  if (root_count(a) != 1) return false;
  for (std::size_t p = 0; p < a.new_row().size(); ++p) {
    if (!a.is_matched(0, p)) return false;
  }
  for (std::size_t r = 1; r < a.row_count(); ++r) {
    for (std::size_t pos = a.row(r).contents_begin(); pos < a.row(r).contents_end(); ++pos) {
      if (!a.is_matched(r, pos)) return false;
    }
  }
  return true;
}

std::vector<ScoredAlignment> rooted(const std::vector<ScoredAlignment>& ranked) {
  std::vector<ScoredAlignment> out;
  for (const auto& sa : ranked) {
    if (root_count(sa.alignment) == 1) out.push_back(sa);
  }
  return out;
}

std::vector<std::pair<Symbol, double>> inference_probabilities(const std::vector<ScoredAlignment>& ranked) {
  std::map<std::string, std::pair<Symbol, double>> acc;
  for (const auto& sa : ranked) {
    std::unordered_set<Symbol> inferred;
    for (const auto& c : infer_completions(sa.alignment)) inferred.insert(c.symbol);
    for (Symbol s : inferred) {
      auto& slot = acc.try_emplace(std::string(s.name()), s, 0.0).first->second;
      slot.second += sa.probability;
    }
  }
  std::vector<std::pair<Symbol, double>> out;
  for (auto& [name, v] : acc) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return !bits_equal(x.second, y.second) && x.second > y.second;
  });
  return out;
}

std::vector<Symbol> decode(const std::vector<Symbol>& code, const Grammar& g, const CostTable& t,
                           const SearchParams& params) {
  if (code.empty()) throw DecodeError("empty code");
  for (Symbol s : code) {
    if (!t.covers(s)) throw DecodeError("code symbol '" + std::string(s.name()) + "' is unknown to the grammar");
  }
  auto ranked = build_alignments(share(Pattern::make_new("code", code)), g, t, params);
  if (ranked.empty()) throw DecodeError("no alignment explains the code");
  const Alignment& a = ranked.front().alignment;
  for (std::size_t pos = 0; pos < code.size(); ++pos) {
    if (!a.is_matched(0, pos)) {
      throw DecodeError("code symbol '" + std::string(code[pos].name()) + "' is not explained by the grammar");
    }
  }
  auto refs = id_symbols(g);
  std::vector<Symbol> surface;
  for (std::size_t c = 0; c < a.column_count(); ++c) {
    bool id_cell = false;
    bool data = false;
    for (const Cell& cell : a.column(c)) {
      if (cell.row == 0 || a.row(cell.row).is_id(cell.pos)) {
        id_cell = true;
      } else if (!refs.count(a.symbol_at(cell))) {
        data = true;
      }
    }
    if (data && !id_cell) surface.push_back(a.column_symbol(c));
  }
  return surface;
}

}  // namespace spm
