#include <doctest.h>

#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "spm/cli.hpp"
#include "support.hpp"

using namespace spmtest;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = spm::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string grammar(const std::string& name) { return fixture("grammars/" + name); }

}  // namespace

TEST_CASE("parse prints scored alignments and the code") {
  auto r = run_cli({"parse", "--grammar", grammar("errors.sp"), "--top-k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("NEW new1: t r a s f o r m a o n") != std::string::npos);
  CHECK(r.out.find("alignment 1: cd ") != std::string::npos);
  CHECK(r.out.find("code: W w1 #W") != std::string::npos);
  CHECK(r.out.find("code: W w3 #W") != std::string::npos);
  CHECK(r.err.empty());
}

TEST_CASE("parse with an explicit New pattern under unit costs") {
  auto r = run_cli({"parse", "--grammar", grammar("errors.sp"), "--new", "t r a s f o r m a o n", "--cost", "unit",
                    "--literal-factor", "1", "--top-k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("alignment 1: cd 8, b_new 11, b_enc 3, p ") != std::string::npos);
}

TEST_CASE("json output is deterministic and well formed") {
  std::vector<std::string> args = {"parse", "--grammar", grammar("parsing.sp"), "--format", "json"};
  auto a = run_cli(args), b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  REQUIRE(j.is_array());
  REQUIRE_FALSE(j[0]["alignments"].empty());
  const auto& top = j[0]["alignments"][0];
  for (const char* key : {"cd", "b_new", "b_enc", "probability", "code", "rows", "columns", "new"}) {
    CHECK(top.contains(key));
  }
  CHECK(top["cd"].get<double>() == doctest::Approx(top["b_new"].get<double>() - top["b_enc"].get<double>()));
}

TEST_CASE("recognise renders rows") {
  auto r = run_cli({"recognise", "--grammar", grammar("occlusion_a.sp"), "--top-k", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("code:") != std::string::npos);
}

TEST_CASE("produce decodes a code") {
  auto r = run_cli({"produce", "--grammar", grammar("errors.sp"), "--code", "W w1 #W"});
  CHECK(r.code == 0);
  CHECK(r.out == "t r a n s f o r m a t i o n\n");
}

TEST_CASE("learn writes the best grammar and score reads it back") {
  std::string out_path = "cli_test_learned.sp";
  auto r = run_cli({"learn", "--corpus", fixture("corpora/two_sentences.sp"), "--out", out_path, "--cost", "unit"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("grammar 1: 5 patterns") != std::string::npos);
  CHECK(r.out.find("total 153") != std::string::npos);
  auto learned = spm::load_pattern_file(out_path);
  CHECK(learned.grammar.size() == 5);

  auto s = run_cli({"score", "--grammar", out_path, "--corpus", fixture("corpora/two_sentences.sp"), "--cost", "unit"});
  CHECK(s.code == 0);
  CHECK(s.out == "g_size 141\ne_size 12\ntotal 153\n");

  auto js = run_cli({"score", "--grammar", out_path, "--corpus", fixture("corpora/two_sentences.sp"), "--cost", "unit",
                     "--format", "json"});
  auto j = nlohmann::json::parse(js.out);
  CHECK(j["total"].get<double>() == doctest::Approx(153.0));
  std::remove(out_path.c_str());
}

TEST_CASE("exit codes") {
  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
  CHECK(run_cli({"parse"}).code == 1);
  CHECK(run_cli({"parse", "--grammar", grammar("errors.sp"), "--beam-width", "0"}).code == 1);
  CHECK(run_cli({"parse", "--grammar", grammar("errors.sp"), "--cost", "zipf"}).code == 1);
  auto unparsed = run_cli({"parse", "--grammar", grammar("errors.sp"), "--new", "q q q"});
  CHECK(unparsed.code == 2);
  CHECK(unparsed.out.find("no alignment") != std::string::npos);
  CHECK(run_cli({"produce", "--grammar", grammar("errors.sp"), "--code", "zz"}).code == 2);
  CHECK(run_cli({"parse", "--grammar", "/nonexistent/g.sp"}).code == 3);
  auto help = run_cli({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("parse") != std::string::npos);
}
