#include <doctest.h>

#include <algorithm>
#include <set>

#include "spm/errors.hpp"
#include "spm/learner.hpp"
#include "support.hpp"

using namespace spm;
using namespace spmtest;

namespace {

LearnParams unit_params() {
  LearnParams p;
  p.cost_model = CostModel::Unit;
  return p;
}

std::set<std::string> contents_of(const std::vector<PatternPtr>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(join_symbols(p->contents()));
  return out;
}

std::set<std::string> sentences(const std::vector<std::vector<Symbol>>& lang) {
  std::set<std::string> out;
  for (const auto& s : lang) out.insert(join_symbols(s));
  return out;
}

}  // namespace

TEST_CASE("learn params validation") {
  LearnParams p;
  CHECK_NOTHROW(p.validate());
  p.max_grammars_kept = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = LearnParams{};
  p.literal_factor = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("fresh identifiers skip taken names") {
  Corpus c;
  add_new(c, make_symbols("A x C"));
  IdAllocator ids(c);
  CHECK(ids.next_class() == Symbol("B"));
  CHECK(ids.next_class() == Symbol("D"));
  for (int i = 0; i < 21; ++i) ids.next_class();  // E .. Y
  CHECK(ids.next_class() == Symbol("Z"));
  CHECK(ids.next_class() == Symbol("P1"));
  CHECK(IdAllocator::discriminator(3) == Symbol("3"));
  CHECK(IdAllocator::tail(Symbol("K")) == Symbol("#K"));
}

TEST_CASE("deriving patterns from the learning pair") {
  auto f = load_pattern_file(fixture("grammars/learning_pair.sp"));
  auto r = build_alignments(f.corpus.news[0], f.grammar, figure_costs(f), SearchParams{});
  REQUIRE_FALSE(r.empty());
  REQUIRE(r.front().alignment.row_count() == 2);
  IdAllocator ids(f.corpus, f.grammar);
  auto derived = derive_patterns(r.front().alignment, ids);
  REQUIRE(derived.size() == 5);  // two runs, two members of the gap class, one abstract pattern
  auto contents = contents_of(derived);
  CHECK(contents.count("t h a t") == 1);
  CHECK(contents.count("r u n s") == 1);
  CHECK(contents.count("g i r l") == 1);
  CHECK(contents.count("b o y") == 1);
  CHECK_THROWS_AS(derive_patterns(Alignment::from_new(f.corpus.news[0]), ids), DataError);
}

TEST_CASE("learning two sentences") {
  auto f = load_pattern_file(fixture("corpora/two_sentences.sp"));
  auto params = unit_params();
  auto res = learn(f.corpus, params);
  REQUIRE_FALSE(res.grammars.empty());
  const auto& best = res.grammars.front();
  CHECK(best.grammar.size() == 5);
  CHECK(best.score.total == doctest::Approx(153.0));
  for (std::size_t i = 1; i < res.grammars.size(); ++i) CHECK(res.grammars[i - 1].score.total <= res.grammars[i].score.total);

  auto t = symbol_costs(best.grammar, f.corpus, params.cost_model, params.literal_factor);
  CHECK(best.score.total < raw_cost(f.corpus, t));
  CHECK(sentences(generate_language(best.grammar, t, params.search)) ==
        std::set<std::string>{"t h a t b o y r u n s", "t h a t g i r l r u n s"});
}

TEST_CASE("a repeated sentence raises the frequency of its pattern") {
  Corpus c;
  add_new(c, make_symbols("t h e c a t"));
  add_new(c, make_symbols("t h e c a t"));
  auto res = learn(c, unit_params());
  REQUIRE_FALSE(res.grammars.empty());
  const auto& g = res.grammars.front().grammar;
  REQUIRE(g.size() == 1);
  CHECK(g.patterns[0]->frequency() == 2);
  CHECK(join_symbols(g.patterns[0]->contents()) == "t h e c a t");
}

TEST_CASE("one sentence is stored verbatim") {
  Corpus c;
  add_new(c, make_symbols("a b c"));
  auto params = unit_params();
  auto res = learn(c, params);
  REQUIRE_FALSE(res.grammars.empty());
  const auto& best = res.grammars.front();
  REQUIRE(best.grammar.size() == 1);
  CHECK(join_symbols(best.grammar.patterns[0]->symbols()) == "A 1 a b c #A");
  // 3 data symbols at literal cost 8, 3 ID symbols in the grammar and again in the code
  CHECK(best.score.g_size == doctest::Approx(27.0));
  CHECK(best.score.e_size == doctest::Approx(3.0));
  CHECK(best.score.total == doctest::Approx(best.score.g_size + best.score.e_size));
}

TEST_CASE("unrelated sentences give no derived patterns") {
  Corpus c;
  add_new(c, make_symbols("a b c"));
  add_new(c, make_symbols("x y z"));
  auto params = unit_params();
  auto pool = generate_candidates(c, params);
  CHECK(contents_of(pool.patterns) == std::set<std::string>{"a b c", "x y z"});
  auto res = learn(c, params);
  REQUIRE_FALSE(res.grammars.empty());
  // one sentence stored (27) and coded (3), the other left raw (24); storing both costs 60
  CHECK(res.grammars.front().grammar.size() == 1);
  CHECK(res.grammars.front().score.total == doctest::Approx(54.0));
}

TEST_CASE("learn input errors") {
  CHECK(learn(Corpus{}, LearnParams{}).grammars.empty());
  Corpus c;
  add_new(c, make_symbols("a"));
  CHECK_THROWS_AS(sift_grammars(Grammar{}, c, LearnParams{}), std::invalid_argument);
}

TEST_CASE("sift beats or ties every single-pattern grammar on random corpora") {
  Rng rng(41);
  auto params = unit_params();
  params.search.beam_width = 64;
  for (int round = 0; round < 4; ++round) {
    auto c = random_corpus(rng);
    auto pool = generate_candidates(c, params);
    SubsetScorer scorer(pool, c, params);
    auto res = sift_grammars(scorer, params);
    REQUIRE_FALSE(res.grammars.empty());
    double best = res.grammars.front().score.total;
    for (std::size_t i = 0; i < pool.size(); ++i) CHECK(best <= scorer.score({i}).total + kBitsEpsilon);
    CHECK(best <= raw_cost(c, scorer.costs()) + 3.0 * static_cast<double>(c.size()) * 8.0);
  }
}
