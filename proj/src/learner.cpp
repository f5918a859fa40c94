#include "spm/learner.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "spm/errors.hpp"

namespace spm {

void LearnParams::validate() const {
  search.validate();
  if (max_grammars_kept == 0 || max_iterations == 0) throw std::invalid_argument("learn counts must be positive");
  if (!(literal_factor > 0)) throw std::invalid_argument("literal factor must be positive");
}

IdAllocator::IdAllocator(const Corpus& c, const Grammar& g) {
  for (const auto& p : c.news) {
    for (Symbol s : p->symbols()) reserve(s);
  }
  for (const auto& p : g.patterns) {
    for (Symbol s : p->symbols()) reserve(s);
  }
}

Symbol IdAllocator::next_class() {
  for (;;) {
    std::size_t n = next_++;
    std::string name = n < 26 ? std::string(1, static_cast<char>('A' + n)) : "P" + std::to_string(n - 25);
    if (taken_.insert(name).second && !taken_.count("#" + name)) {
      taken_.insert("#" + name);
      return Symbol(name);
    }
  }
}

Symbol IdAllocator::discriminator(std::size_t n) { return Symbol(std::to_string(n)); }

Symbol IdAllocator::tail(Symbol cls) { return Symbol("#" + std::string(cls.name())); }

namespace {

PatternPtr class_member(Symbol cls, std::size_t disc, std::vector<Symbol> contents, std::uint64_t freq) {
  return share(Pattern::make_old("", {cls, IdAllocator::discriminator(disc)}, std::move(contents),
                                 {IdAllocator::tail(cls)}, freq));
}

struct Piece {
  bool matched = false;
  std::vector<Symbol> new_side;
  std::vector<Symbol> old_side;  // equal to new_side for matched runs
  Symbol cls;
};

}  // namespace

std::vector<PatternPtr> derive_patterns(const Alignment& a, IdAllocator& ids) {
  if (a.row_count() != 2) throw DataError("pattern derivation needs a two-row alignment");
  const Pattern& x = a.new_row();
  const Pattern& y = a.row(1);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t p = 0; p < x.size(); ++p) {
    for (const Cell& cell : a.column(a.column_of(0, p))) {
      if (cell.row == 1 && !y.is_id(cell.pos)) pairs.emplace_back(p, cell.pos);
    }
  }
  if (pairs.empty()) throw DataError("alignment has no hit on the Old contents");

  auto xs = x.symbols();
  auto ys = y.symbols();
  auto slice = [](std::span<const Symbol> s, std::size_t from, std::size_t to) {
    return std::vector<Symbol>(s.begin() + static_cast<std::ptrdiff_t>(from), s.begin() + static_cast<std::ptrdiff_t>(to));
  };
  std::vector<Piece> pieces;
  std::size_t np = 0;
  std::size_t oq = y.contents_begin();
  auto gap = [&](std::size_t nto, std::size_t oto) {
    if (np < nto || oq < oto) pieces.push_back({false, slice(xs, np, nto), slice(ys, oq, oto), {}});
  };
  for (std::size_t i = 0; i < pairs.size();) {
    std::size_t j = i;
    while (j + 1 < pairs.size() && pairs[j + 1].first == pairs[j].first + 1 && pairs[j + 1].second == pairs[j].second + 1) ++j;
    gap(pairs[i].first, pairs[i].second);
    auto run = slice(xs, pairs[i].first, pairs[j].first + 1);
    pieces.push_back({true, run, run, {}});
    np = pairs[j].first + 1;
    oq = pairs[j].second + 1;
    i = j + 1;
  }
  gap(xs.size(), y.contents_end());

  std::uint64_t fy = y.frequency();
  std::vector<PatternPtr> out;
  for (auto& piece : pieces) {
    if (!piece.matched) continue;
    piece.cls = ids.next_class();
    out.push_back(class_member(piece.cls, 1, piece.new_side, fy + 1));
  }
  for (auto& piece : pieces) {
    if (piece.matched) continue;
    piece.cls = ids.next_class();
    std::size_t disc = 1;
    if (!piece.new_side.empty()) out.push_back(class_member(piece.cls, disc++, piece.new_side, 1));
    if (!piece.old_side.empty()) out.push_back(class_member(piece.cls, disc, piece.old_side, fy));
  }
  if (pieces.size() == 1) return out;

  auto shape = [&](bool new_side) {
    std::vector<Symbol> refs;
    for (const auto& piece : pieces) {
      if (piece.matched || !(new_side ? piece.new_side : piece.old_side).empty()) {
        refs.push_back(piece.cls);
        refs.push_back(IdAllocator::tail(piece.cls));
      }
    }
    return refs;
  };
  Symbol top = ids.next_class();
  auto new_shape = shape(true);
  auto old_shape = shape(false);
  if (new_shape == old_shape) {
    out.push_back(class_member(top, 1, new_shape, fy + 1));
  } else {
    out.push_back(class_member(top, 1, new_shape, 1));
    out.push_back(class_member(top, 2, old_shape, fy));
  }
  return out;
}

double raw_cost(const Corpus& c, const CostTable& t) {
  double bits = 0;
  for (const auto& x : c.news) {
    for (Symbol s : x->symbols()) bits += t.literal(s);
  }
  return bits;
}

GrammarScore grammar_score(const Grammar& g, const Corpus& c, const CostTable& t, const SearchParams& params) {
  GrammarScore out;
  auto refs = id_symbols(g);
  for (const auto& p : g.patterns) {
    for (std::size_t pos = 0; pos < p->size(); ++pos) {
      Symbol s = (*p)[pos];
      out.g_size += p->is_id(pos) || refs.count(s) ? t.cost(s) : t.literal(s);
    }
  }
  for (const auto& x : c.news) {
    double bits = 0;
    for (Symbol s : x->symbols()) bits += t.literal(s);
    if (!g.empty()) {
      for (const auto& sa : build_alignments(x, g, t, params)) {
        if (complete_parse(sa.alignment)) bits = std::min(bits, sa.score.b_enc);
      }
    }
    out.e_size += bits;
  }
  out.total = out.g_size + out.e_size;
  return out;
}

GrammarScore grammar_score(const Grammar& g, const Corpus& c, const LearnParams& params) {
  params.validate();
  return grammar_score(g, c, symbol_costs(g, c, params.cost_model, params.literal_factor), params.search);
}

namespace {

bool is_leaf(const Pattern& p, const std::unordered_set<Symbol>& refs) {
  return std::none_of(p.contents().begin(), p.contents().end(), [&](Symbol s) { return refs.count(s) != 0; });
}

class CandidatePool {
 public:
  std::size_t add(const PatternPtr& p) {
    auto [it, fresh] = index_.emplace(p->to_string(), patterns_.size());
    if (fresh) {
      patterns_.push_back(p);
    } else {
      bump(it->second);
    }
    return it->second;
  }
  void bump(std::size_t i) { patterns_[i] = share(patterns_[i]->with_frequency(patterns_[i]->frequency() + 1)); }
  const PatternPtr& operator[](std::size_t i) const { return patterns_[i]; }
  std::size_t find(const std::string& id) const {
    for (std::size_t i = 0; i < patterns_.size(); ++i) {
      if (patterns_[i]->id() == id) return i;
    }
    return SIZE_MAX;
  }
  std::size_t next_discriminator(Symbol cls, const std::vector<PatternPtr>& pending) const {
    std::size_t top = 0;
    auto look = [&](const PatternPtr& p) {
      if (p->class_symbol() != cls || p->head().size() != 2) return;
      try {
        top = std::max<std::size_t>(top, std::stoul(std::string(p->head()[1].name())));
      } catch (const std::exception&) {
      }
    };
    for (const auto& p : patterns_) look(p);
    for (const auto& p : pending) look(p);
    return top + 1;
  }
  Grammar grammar(const std::vector<std::size_t>& which) const {
    Grammar g;
    for (auto i : which) g.patterns.push_back(patterns_[i]);
    return g;
  }
  Grammar all() const { return Grammar{patterns_, ""}; }

 private:
  std::vector<PatternPtr> patterns_;
  std::map<std::string, std::size_t> index_;
};

// New members for classes that the parse of x used only partly: a leaf row
// whose contents were matched in part gets a sibling holding the New
// material around its hits; an empty "K #K" slot gets a member holding the
// unmatched New run at its place.
std::vector<PatternPtr> sibling_patterns(const Alignment& a, const Grammar& g, const CandidatePool& pool) {
  const Pattern& x = a.new_row();
  const std::size_t n = x.size();
  auto refs = id_symbols(g);
  std::unordered_set<Symbol> classes;
  for (const auto& p : g.patterns) classes.insert(p->class_symbol());
  std::vector<bool> hit(n);
  for (std::size_t p = 0; p < n; ++p) hit[p] = a.is_matched(0, p);

  std::vector<PatternPtr> out;
  std::set<std::string> emitted;
  auto emit = [&](Symbol cls, std::vector<Symbol> contents) {
    auto p = class_member(cls, pool.next_discriminator(cls, out), std::move(contents), 1);
    auto key = std::string(cls.name()) + "|" + p->to_string().substr(p->to_string().find('|'));
    if (emitted.insert(key).second) out.push_back(p);
  };
  auto new_pos_in = [&](std::size_t c) -> std::size_t {
    for (const Cell& cell : a.column(c)) {
      if (cell.row == 0) return cell.pos;
    }
    return SIZE_MAX;
  };

  for (std::size_t r = 1; r < a.row_count(); ++r) {
    const Pattern& p = a.row(r);
    if (!is_leaf(p, refs)) continue;
    std::size_t lo = SIZE_MAX, hi = 0;
    bool partial = false;
    for (std::size_t pos = p.contents_begin(); pos < p.contents_end(); ++pos) {
      std::size_t np = new_pos_in(a.column_of(r, pos));
      if (np == SIZE_MAX) {
        partial = true;
        continue;
      }
      lo = std::min(lo, np);
      hi = std::max(hi, np);
    }
    if (lo == SIZE_MAX || !partial) continue;
    while (lo > 0 && !hit[lo - 1]) --lo;
    while (hi + 1 < n && !hit[hi + 1]) ++hi;
    std::vector<Symbol> material(x.symbols().begin() + static_cast<std::ptrdiff_t>(lo),
                                 x.symbols().begin() + static_cast<std::ptrdiff_t>(hi + 1));
    if (!std::equal(material.begin(), material.end(), p.contents().begin(), p.contents().end())) {
      emit(p.class_symbol(), std::move(material));
    }
  }

  for (std::size_t r = 1; r < a.row_count(); ++r) {
    const Pattern& p = a.row(r);
    for (std::size_t pos = p.contents_begin(); pos + 1 < p.contents_end(); ++pos) {
      Symbol k = p[pos];
      if (!classes.count(k) || p[pos + 1] != IdAllocator::tail(k)) continue;
      std::size_t ck = a.column_of(r, pos);
      std::size_t ct = a.column_of(r, pos + 1);
      bool filled = std::any_of(a.column(ck).begin(), a.column(ck).end(),
                                [&](const Cell& cell) { return cell.row != 0 && cell.row != r; });
      if (filled) continue;
      std::ptrdiff_t left = -1;
      std::size_t right = n;
      for (std::size_t q = 0; q < n; ++q) {
        if (!hit[q]) continue;
        std::size_t c = a.column_of(0, q);
        if (c < ck) left = static_cast<std::ptrdiff_t>(q);
        if (c > ct && right == n) right = q;
      }
      auto from = static_cast<std::size_t>(left + 1);
      if (from >= right) continue;
      if (std::any_of(hit.begin() + static_cast<std::ptrdiff_t>(from), hit.begin() + static_cast<std::ptrdiff_t>(right),
                      [](bool h) { return h; })) {
        continue;
      }
      emit(k, std::vector<Symbol>(x.symbols().begin() + static_cast<std::ptrdiff_t>(from),
                                  x.symbols().begin() + static_cast<std::ptrdiff_t>(right)));
    }
  }
  return out;
}

}  // namespace

Grammar generate_candidates(const Corpus& c, const LearnParams& params) {
  params.validate();
  if (c.empty()) return {};
  IdAllocator ids(c);
  const Symbol verbatim_class = ids.next_class();
  CandidatePool pool;
  std::vector<std::size_t> working;
  std::map<std::string, std::size_t> verbatim;  // by joined symbols

  for (const auto& x : c.news) {
    std::vector<Symbol> xs(x->symbols().begin(), x->symbols().end());
    std::set<std::size_t> counted;
    bool handled = false;
    if (!working.empty()) {
      Grammar wg = pool.grammar(working);
      auto t = symbol_costs(wg, Corpus{{x}}, params.cost_model, params.literal_factor);
      auto ranked = build_alignments(x, wg, t, params.search);
      if (!ranked.empty()) {
        const Alignment& a = ranked.front().alignment;
        if (complete_parse(a)) {
          for (std::size_t r = 1; r < a.row_count(); ++r) {
            std::size_t i = pool.find(a.row(r).id());
            pool.bump(i);
            counted.insert(i);
          }
          handled = true;
        } else if (a.row_count() == 2 && is_leaf(a.row(1), id_symbols(wg))) {
          auto derived = derive_patterns(a, ids);
          std::size_t decomposed = pool.find(a.row(1).id());
          working.erase(std::remove(working.begin(), working.end(), decomposed), working.end());
          for (const auto& p : derived) working.push_back(pool.add(p));
          handled = true;
        } else {
          auto siblings = sibling_patterns(a, wg, pool);
          for (const auto& p : siblings) working.push_back(pool.add(p));
          handled = !siblings.empty();
        }
      }
    }
    std::size_t copy;
    const std::string key = join_symbols(xs);
    if (auto it = verbatim.find(key); it != verbatim.end()) {
      copy = it->second;
      if (!counted.count(copy)) pool.bump(copy);
    } else {
      copy = pool.add(class_member(verbatim_class, verbatim.size() + 1, xs, 1));
      verbatim.emplace(key, copy);
    }
    if (!handled && std::find(working.begin(), working.end(), copy) == working.end()) working.push_back(copy);
  }
  return pool.all();
}

namespace {

using Subset = std::vector<std::size_t>;  // sorted pool indices

struct Candidate {
  Subset subset;
  GrammarScore score;
};

bool candidate_better(const Candidate& x, const Candidate& y) {
  if (!bits_equal(x.score.total, y.score.total)) return x.score.total < y.score.total;
  if (x.subset.size() != y.subset.size()) return x.subset.size() < y.subset.size();
  return x.subset < y.subset;
}

}  // namespace

SubsetScorer::SubsetScorer(Grammar pool, Corpus c, const LearnParams& params)
    : pool_(std::move(pool)),
      corpus_(std::move(c)),
      search_(params.search),
      costs_(symbol_costs(pool_, corpus_, params.cost_model, params.literal_factor)),
      memo_(corpus_.size()) {
  for (const auto& x : corpus_.news) raw_.push_back(raw_cost(Corpus{{x}}, costs_));
}

Grammar SubsetScorer::grammar(const std::vector<std::size_t>& subset) const {
  Grammar g;
  for (auto i : subset) g.patterns.push_back(pool_.patterns[i]);
  return g;
}

const std::optional<SubsetScorer::Parse>& SubsetScorer::best_within(std::size_t sentence,
                                                                   const std::vector<bool>& members) {
  auto& memo = memo_[sentence];
  if (auto it = memo.find(members); it != memo.end()) return it->second;
  std::vector<std::size_t> which;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i]) which.push_back(i);
  }
  std::optional<Parse> best;
  if (!which.empty()) {
    ++builds_;
    std::map<const Pattern*, std::size_t> index;
    for (auto i : which) index[pool_.patterns[i].get()] = i;
    for (const auto& sa : build_alignments(corpus_.news[sentence], grammar(which), costs_, search_)) {
      if (!complete_parse(sa.alignment) || (best && !bits_less(sa.score.b_enc, best->b_enc))) continue;
      Parse p{{}, sa.score.b_enc};
      for (std::size_t r = 1; r < sa.alignment.row_count(); ++r) p.used.push_back(index.at(sa.alignment.row_ptr(r).get()));
      std::sort(p.used.begin(), p.used.end());
      p.used.erase(std::unique(p.used.begin(), p.used.end()), p.used.end());
      best = std::move(p);
    }
  }
  return memo.emplace(members, std::move(best)).first->second;
}

GrammarScore SubsetScorer::score(const std::vector<std::size_t>& subset) {
  GrammarScore out;
  Grammar g = grammar(subset);
  auto refs = id_symbols(g);
  for (const auto& p : g.patterns) {
    for (std::size_t pos = 0; pos < p->size(); ++pos) {
      Symbol s = (*p)[pos];
      out.g_size += p->is_id(pos) || refs.count(s) ? costs_.cost(s) : costs_.literal(s);
    }
  }
  std::vector<bool> in_subset(pool_.size(), false);
  for (auto i : subset) in_subset.at(i) = true;
  for (std::size_t k = 0; k < corpus_.size(); ++k) {
    std::vector<bool> members(pool_.size(), true);
    double bits = raw_[k];
    for (;;) {
      const auto& best = best_within(k, members);
      if (!best) break;
      auto outside = std::find_if(best->used.begin(), best->used.end(), [&](std::size_t i) { return !in_subset[i]; });
      if (outside == best->used.end()) {
        bits = std::min(bits, best->b_enc);
        break;
      }
      members[*outside] = false;
    }
    out.e_size += bits;
  }
  out.total = out.g_size + out.e_size;
  return out;
}

LearnResult sift_grammars(const Grammar& pool, const Corpus& c, const LearnParams& params) {
  params.validate();
  if (pool.empty()) throw std::invalid_argument("empty candidate pool");
  SubsetScorer scorer(pool, c, params);
  return sift_grammars(scorer, params);
}

LearnResult sift_grammars(SubsetScorer& scorer, const LearnParams& params) {
  params.validate();
  const Grammar& pool = scorer.pool();
  if (pool.empty()) throw std::invalid_argument("empty candidate pool");
  const std::size_t n = pool.size();

  std::set<Subset> seen;
  std::vector<Candidate> scored;
  auto evaluate = [&](const std::vector<Subset>& fresh) {
    std::vector<Candidate> out;
    for (const auto& s : fresh) out.push_back({s, scorer.score(s)});
    scored.insert(scored.end(), out.begin(), out.end());
    std::sort(out.begin(), out.end(), candidate_better);
    if (out.size() > params.search.beam_width) out.resize(params.search.beam_width);
    return out;
  };

  std::vector<Subset> fresh;
  for (std::size_t i = 0; i < n; ++i) fresh.push_back({i});
  Subset everything(n);
  for (std::size_t i = 0; i < n; ++i) everything[i] = i;
  fresh.push_back(everything);
  for (const auto& s : fresh) seen.insert(s);
  fresh.erase(std::unique(fresh.begin(), fresh.end()), fresh.end());
  auto beam = evaluate(fresh);

  for (std::size_t stage = 0; stage < params.max_iterations && !beam.empty(); ++stage) {
    std::vector<Subset> next;
    for (const auto& cand : beam) {
      for (std::size_t i = 0; i < n; ++i) {
        Subset s = cand.subset;
        auto it = std::lower_bound(s.begin(), s.end(), i);
        if (it != s.end() && *it == i) {
          s.erase(it);
        } else {
          s.insert(it, i);
        }
        if (!s.empty() && seen.insert(s).second) next.push_back(std::move(s));
      }
    }
    beam = evaluate(next);
  }

  std::sort(scored.begin(), scored.end(), candidate_better);
  LearnResult result;
  std::vector<bool> kept(n, false);
  for (std::size_t k = 0; k < scored.size() && k < params.max_grammars_kept; ++k) {
    result.grammars.push_back({scorer.grammar(scored[k].subset), scored[k].score});
    for (auto i : scored[k].subset) kept[i] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!kept[i]) result.residual_discarded.push_back(pool.patterns[i]->id());
  }
  return result;
}

LearnResult learn(const Corpus& c, const LearnParams& params) {
  Grammar pool = generate_candidates(c, params);
  if (pool.empty()) return {};
  return sift_grammars(pool, c, params);
}

namespace {

class CodeEnumerator {
 public:
  CodeEnumerator(const Grammar& g, std::size_t max_depth, std::size_t cap) : max_depth_(max_depth), cap_(cap) {
    for (const auto& p : g.patterns) members_[p->class_symbol()].push_back(p.get());
  }

  // Codes of all derivations from p; a nested pattern contributes its
  // discriminators (its class symbol and a tail that closes a slot are
  // unified with the parent's reference).
  std::vector<std::vector<Symbol>> codes(const Pattern& p, bool top, std::size_t depth) const {
    if (depth > max_depth_) return {};
    std::vector<std::vector<Symbol>> partial{{}};
    auto head = p.head();
    partial.front().assign(head.begin() + (top ? 0 : 1), head.end());
    for (std::size_t pos = p.contents_begin(); pos < p.contents_end(); ++pos) {
      auto it = members_.find(p[pos]);
      if (it == members_.end()) continue;
      bool closed = pos + 1 < p.contents_end() && p[pos + 1] == IdAllocator::tail(p[pos]);
      std::vector<std::vector<Symbol>> options;
      for (const Pattern* m : it->second) {
        for (auto& code : codes(*m, false, depth + 1)) {
          if (!closed) code.insert(code.end(), m->tail().begin(), m->tail().end());
          options.push_back(std::move(code));
        }
      }
      if (options.empty()) return {};
      std::vector<std::vector<Symbol>> grown;
      for (const auto& prefix : partial) {
        for (const auto& opt : options) {
          if (grown.size() >= cap_) break;
          auto code = prefix;
          code.insert(code.end(), opt.begin(), opt.end());
          grown.push_back(std::move(code));
        }
      }
      partial = std::move(grown);
      if (closed) ++pos;
    }
    if (top) {
      for (auto& code : partial) code.insert(code.end(), p.tail().begin(), p.tail().end());
    }
    return partial;
  }

 private:
  std::map<Symbol, std::vector<const Pattern*>, SymbolNameLess> members_;
  std::size_t max_depth_;
  std::size_t cap_;
};

}  // namespace

std::vector<std::vector<Symbol>> generate_language(const Grammar& g, const CostTable& t, const SearchParams& params,
                                                   std::size_t max_depth, std::size_t max_sentences) {
  std::unordered_set<Symbol> referenced;
  for (const auto& p : g.patterns) {
    for (Symbol s : p->contents()) referenced.insert(s);
  }
  CodeEnumerator codes(g, max_depth, max_sentences);
  std::set<std::vector<std::string>> sentences;
  for (const auto& p : g.patterns) {
    if (referenced.count(p->class_symbol())) continue;
    for (const auto& code : codes.codes(*p, true, 0)) {
      if (sentences.size() >= max_sentences) break;
      try {
        std::vector<std::string> names;
        for (Symbol s : decode(code, g, t, params)) names.emplace_back(s.name());
        sentences.insert(std::move(names));
      } catch (const DecodeError&) {
        // codes the grammar cannot explain are not part of its language
      }
    }
  }
  std::vector<std::vector<Symbol>> out;
  for (const auto& names : sentences) {
    std::vector<Symbol> syms;
    for (const auto& n : names) syms.emplace_back(n);
    out.push_back(std::move(syms));
  }
  return out;
}

}  // namespace spm
