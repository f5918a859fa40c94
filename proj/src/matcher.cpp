#include "spm/matcher.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace spm {

void SearchParams::validate() const {
  if (beam_width < 1 || max_alternatives < 1 || depth < 1 || min_hit_run < 1) {
    throw std::invalid_argument("search parameters must all be at least 1");
  }
  if (max_alternatives > beam_width) {
    throw std::invalid_argument("max_alternatives must not exceed beam_width");
  }
}

std::size_t MatchSet::runs() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].first != pairs[i - 1].first + 1 || pairs[i].second != pairs[i - 1].second + 1) ++n;
  }
  return n;
}

bool match_better(const MatchSet& x, const MatchSet& y) {
  if (!bits_equal(x.score, y.score)) return x.score > y.score;
  auto rx = x.runs(), ry = y.runs();
  if (rx != ry) return rx < ry;
  return x.pairs < y.pairs;
}

namespace {

bool runs_long_enough(const MatchSet& ms, std::size_t min_run) {
  if (min_run <= 1) return true;
  std::size_t len = 0;
  for (std::size_t i = 0; i < ms.pairs.size(); ++i) {
    bool cont = i > 0 && ms.pairs[i].first == ms.pairs[i - 1].first + 1 &&
                ms.pairs[i].second == ms.pairs[i - 1].second + 1;
    if (!cont) {
      if (i > 0 && len < min_run) return false;
      len = 0;
    }
    ++len;
  }
  return len >= min_run;
}

constexpr std::uint32_t kNoNode = UINT32_MAX;

// Pairs are kept as chains in an arena shared by all states of one search,
// and forbidden slot sets as fixed-width rows of words, so that extending
// a state costs no allocation.
class StagedSearch {
 public:
  StagedSearch(const MatchTarget& target, const SearchParams& params)
      : target_(target), params_(params), words_((target.symbols.size() + 63) / 64) {
    if (words_ == 0) words_ = 1;
    before_.assign(target.symbols.size() * words_, 0);
    for (std::size_t s = 0; s < target.symbols.size(); ++s) {
      const auto& w = target.before[s].words();
      std::copy_n(w.begin(), std::min(w.size(), words_), before_.begin() + static_cast<std::ptrdiff_t>(s * words_));
      before_[s * words_ + s / 64] |= std::uint64_t{1} << (s % 64);
    }
    slots_.clear();
    nodes_.clear();
    states_.clear();
    for (std::size_t s = 0; s < target.symbols.size(); ++s) slots_.emplace_back(target.symbols[s].id(), s);
    std::sort(slots_.begin(), slots_.end());
  }

  std::vector<MatchSet> run(std::span<const Symbol> seq) {
    states_.push_back({0, 0, kNoNode});
    forbidden_.assign(words_, 0);
    for (std::size_t pos = 0; pos < seq.size(); ++pos) {
      auto range = std::equal_range(slots_.begin(), slots_.end(), std::pair<std::uint32_t, std::size_t>(seq[pos].id(), 0),
                                    [](const auto& a, const auto& b) { return a.first < b.first; });
      if (range.first == range.second) continue;
      next_states_.clear();
      next_forbidden_.clear();
      for (std::size_t i = 0; i < states_.size(); ++i) {
        const State st = states_[i];
        const std::uint64_t* f = &forbidden_[i * words_];
        push(st, f);
        for (auto it = range.first; it != range.second; ++it) {
          std::size_t slot = it->second;
          if ((f[slot / 64] >> (slot % 64)) & 1U) continue;
          if (target_.blocked && target_.blocked(slot, pos)) continue;
          State child = st;
          if (st.node == kNoNode || nodes_[st.node].slot + 1 != slot || nodes_[st.node].pos + 1 != pos) ++child.runs;
          nodes_.push_back({st.node, static_cast<std::uint32_t>(slot), static_cast<std::uint32_t>(pos)});
          child.node = static_cast<std::uint32_t>(nodes_.size() - 1);
          child.score += target_.weight(slot, pos);
          std::size_t at = next_forbidden_.size();
          push(child, f);
          for (std::size_t w = 0; w < words_; ++w) next_forbidden_[at + w] |= before_[slot * words_ + w];
        }
      }
      prune();
    }

    std::vector<MatchSet> out;
    for (const State& st : states_) {
      if (st.node == kNoNode) continue;
      MatchSet ms{pairs_of(st.node), st.score};
      if (runs_long_enough(ms, params_.min_hit_run)) out.push_back(std::move(ms));
    }
    std::sort(out.begin(), out.end(), match_better);
    if (out.size() > params_.max_alternatives) out.resize(params_.max_alternatives);
    return out;
  }

 private:
  struct Node {
    std::uint32_t parent;
    std::uint32_t slot;
    std::uint32_t pos;
  };
  struct State {
    double score;
    std::size_t runs;
    std::uint32_t node;
  };

  void push(const State& st, const std::uint64_t* f) {
    next_states_.push_back(st);
    next_forbidden_.insert(next_forbidden_.end(), f, f + words_);
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs_of(std::uint32_t node) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (; node != kNoNode; node = nodes_[node].parent) out.emplace_back(nodes_[node].slot, nodes_[node].pos);
    std::reverse(out.begin(), out.end());
    return out;
  }

  bool pairs_less(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return false;
    auto chain = [&](std::uint32_t node, std::vector<std::uint32_t>& out) {
      out.clear();
      for (; node != kNoNode; node = nodes_[node].parent) out.push_back(node);
    };
    chain(a, chain_a_);
    chain(b, chain_b_);
    auto ia = chain_a_.rbegin(), ib = chain_b_.rbegin();
    for (; ia != chain_a_.rend() && ib != chain_b_.rend(); ++ia, ++ib) {
      if (*ia == *ib) continue;
      const Node& x = nodes_[*ia];
      const Node& y = nodes_[*ib];
      if (x.slot != y.slot) return x.slot < y.slot;
      if (x.pos != y.pos) return x.pos < y.pos;
    }
    return ib != chain_b_.rend();
  }

  bool better(const State& x, const State& y) const {
    if (!bits_equal(x.score, y.score)) return x.score > y.score;
    if (x.runs != y.runs) return x.runs < y.runs;
    return pairs_less(x.node, y.node);
  }

  int compare_forbidden(std::size_t a, std::size_t b) const {
    for (std::size_t w = 0; w < words_; ++w) {
      auto x = next_forbidden_[a * words_ + w], y = next_forbidden_[b * words_ + w];
      if (x != y) return x < y ? -1 : 1;
    }
    return 0;
  }

  // States that have excluded the same slots are interchangeable for the
  // future: keep the best `depth` of each such group, group leaders first,
  // at most beam_width in all. The order of the survivors does not matter.
  void prune() {
    const std::size_t n = next_states_.size();
    order_.resize(n);
    for (std::size_t i = 0; i < n; ++i) order_[i] = i;
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      int c = compare_forbidden(a, b);
      return c != 0 ? c < 0 : a < b;
    });
    auto by_state = [&](std::size_t a, std::size_t b) { return better(next_states_[a], next_states_[b]); };
    kept_.clear();
    for (std::size_t lo = 0; lo < n;) {
      std::size_t hi = lo + 1;
      while (hi < n && compare_forbidden(order_[lo], order_[hi]) == 0) ++hi;
      auto first = order_.begin() + static_cast<std::ptrdiff_t>(lo);
      auto last = order_.begin() + static_cast<std::ptrdiff_t>(hi);
      std::size_t take = std::min(hi - lo, params_.depth);
      std::partial_sort(first, first + static_cast<std::ptrdiff_t>(take), last, by_state);
      for (std::size_t r = 0; r < take; ++r) kept_.emplace_back(r, order_[lo + r]);
      lo = hi;
    }
    if (kept_.size() > params_.beam_width) {
      auto nth = kept_.begin() + static_cast<std::ptrdiff_t>(params_.beam_width);
      std::nth_element(kept_.begin(), nth, kept_.end(), [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return by_state(a.second, b.second);
      });
      kept_.resize(params_.beam_width);
    }
    states_.clear();
    forbidden_.clear();
    for (const auto& k : kept_) {
      states_.push_back(next_states_[k.second]);
      auto f = next_forbidden_.begin() + static_cast<std::ptrdiff_t>(k.second * words_);
      forbidden_.insert(forbidden_.end(), f, f + static_cast<std::ptrdiff_t>(words_));
    }
  }

  // Buffers outlive one search so that repeated calls on a thread reuse
  // their capacity.
  struct Workspace {
    std::vector<std::uint64_t> before;
    std::vector<std::pair<std::uint32_t, std::size_t>> slots;
    std::vector<Node> nodes;
    std::vector<State> states, next_states;
    std::vector<std::uint64_t> forbidden, next_forbidden;
    std::vector<std::size_t> order;
    std::vector<std::uint32_t> chain_a, chain_b;
    std::vector<std::pair<std::size_t, std::size_t>> kept;
  };
  static Workspace& workspace() {
    thread_local Workspace ws;
    return ws;
  }

  const MatchTarget& target_;
  const SearchParams& params_;
  std::size_t words_;
  Workspace& ws_ = workspace();
  std::vector<std::uint64_t>& before_ = ws_.before;  // ancestors plus the slot itself, per slot
  std::vector<std::pair<std::uint32_t, std::size_t>>& slots_ = ws_.slots;  // (symbol id, slot), sorted
  std::vector<Node>& nodes_ = ws_.nodes;
  std::vector<State>& states_ = ws_.states;
  std::vector<State>& next_states_ = ws_.next_states;
  std::vector<std::uint64_t>& forbidden_ = ws_.forbidden;
  std::vector<std::uint64_t>& next_forbidden_ = ws_.next_forbidden;
  std::vector<std::size_t>& order_ = ws_.order;
  std::vector<std::uint32_t>& chain_a_ = ws_.chain_a;
  std::vector<std::uint32_t>& chain_b_ = ws_.chain_b;
  std::vector<std::pair<std::size_t, std::size_t>>& kept_ = ws_.kept;
};

}  // namespace

std::vector<MatchSet> staged_match(const MatchTarget& target, std::span<const Symbol> seq,
                                   const SearchParams& params) {
  params.validate();
  return StagedSearch(target, params).run(seq);
}

std::vector<MatchSet> find_matches(std::span<const Symbol> a, std::span<const Symbol> b, const CostTable& costs,
                                   const SearchParams& params) {
  costs.require(a);
  costs.require(b);
  MatchTarget target;
  target.symbols.assign(a.begin(), a.end());
  target.before.resize(a.size());
  for (std::size_t j = 1; j < a.size(); ++j) {
    target.before[j] = target.before[j - 1];
    target.before[j].set(j - 1);
  }
  target.weight = [&](std::size_t slot, std::size_t) { return costs.cost(a[slot]); };
  return staged_match(target, b, params);
}

MatchSet hcs_oracle(std::span<const Symbol> a, std::span<const Symbol> b, const CostTable& costs) {
  if (a.size() > 16 || b.size() > 16) throw std::invalid_argument("hcs_oracle is limited to 16 symbols per input");
  costs.require(a);
  costs.require(b);
  const std::size_t n = a.size(), m = b.size();
  // best[i][j]: heaviest common subsequence of a[i..] and b[j..]
  std::vector<std::vector<double>> best(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      double v = std::max(best[i + 1][j], best[i][j + 1]);
      if (a[i] == b[j]) v = std::max(v, best[i + 1][j + 1] + costs.cost(a[i]));
      best[i][j] = v;
    }
  }
  MatchSet ms;
  ms.score = best[0][0];
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (a[i] == b[j] && bits_equal(best[i][j], best[i + 1][j + 1] + costs.cost(a[i]))) {
      ms.pairs.emplace_back(i, j);
      ++i;
      ++j;
    } else if (bits_equal(best[i][j], best[i + 1][j])) {
      ++i;
    } else {
      ++j;
    }
  }
  return ms;
}

std::string check_matchset(const MatchSet& ms, std::span<const Symbol> a, std::span<const Symbol> b) {
  for (std::size_t k = 0; k < ms.pairs.size(); ++k) {
    auto [i, j] = ms.pairs[k];
    if (i >= a.size() || j >= b.size()) return "pair " + std::to_string(k) + " out of range";
    if (!(a[i] == b[j])) return "pair " + std::to_string(k) + " joins unequal symbols";
    if (k > 0 && (i <= ms.pairs[k - 1].first || j <= ms.pairs[k - 1].second)) {
      return "pair " + std::to_string(k) + " is not strictly increasing";
    }
  }
  return {};
}

}  // namespace spm
