#include "spm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "spm/errors.hpp"
#include "spm/json_io.hpp"
#include "spm/render.hpp"

namespace spm::cli {

void Options::validate() const {
  search.validate();
  if (top_k == 0) throw std::invalid_argument("top_k must be at least 1");
  if (!(literal_factor > 0)) throw std::invalid_argument("literal factor must be positive");
}

namespace {

struct Inputs {
  Options opts;
  std::string cost = "frequency";
  std::string format = "text";
  std::string grammar, corpus, new_inline, new_file, code, out;
  std::size_t max_grammars = 2;
  std::size_t max_iterations = 50;
};

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(6) << x;
  return s.str();
}

std::vector<Symbol> split_symbols(const std::string& text) {
  std::istringstream in(text);
  std::vector<Symbol> out;
  for (std::string tok; in >> tok;) out.emplace_back(tok);
  return out;
}

std::string join(std::span<const Symbol> symbols) {
  std::string out;
  for (auto s : symbols) {
    if (!out.empty()) out += ' ';
    out += s.name();
  }
  return out;
}

void finish_options(Inputs& in) {
  in.opts.cost_model = in.cost == "unit" ? CostModel::Unit : CostModel::Frequency;
  in.opts.format = in.format == "json" ? OutputFormat::Json : OutputFormat::Text;
  in.opts.validate();
}

Corpus news_for(const Inputs& in, const PatternFile& grammar_file) {
  Corpus c;
  if (!in.new_inline.empty()) {
    add_new(c, split_symbols(in.new_inline));
  } else if (!in.new_file.empty()) {
    c = load_pattern_file(in.new_file).corpus;
  } else {
    c = grammar_file.corpus;
  }
  if (c.empty()) throw std::invalid_argument("no New pattern given");
  return c;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw FileError("cannot write " + path);
  f << text;
  if (!f.flush()) throw FileError("cannot write " + path);
}

void run_parse(const Inputs& in, bool recognise, std::ostream& out) {
  auto file = load_pattern_file(in.grammar);
  Corpus news = news_for(in, file);
  auto costs = symbol_costs(file.grammar, news, in.opts.cost_model, in.opts.literal_factor);
  nlohmann::json results = nlohmann::json::array();
  std::string unparsed;
  for (const auto& n : news.news) {
    auto ranked = build_alignments(n, file.grammar, costs, in.opts.search);
    if (ranked.empty()) unparsed += (unparsed.empty() ? "" : ", ") + n->id();
    if (ranked.size() > in.opts.top_k) ranked.resize(in.opts.top_k);
    if (in.opts.format == OutputFormat::Json) {
      nlohmann::json r{{"new_id", n->id()}};
      nlohmann::json alignments = nlohmann::json::array();
      for (const auto& sa : ranked) {
        auto j = scored_json(sa);
        auto enc = derive_encoding(sa.alignment, costs);
        j["code"] = nlohmann::json::array();
        for (auto s : enc.symbols) j["code"].push_back(std::string(s.name()));
        if (recognise) {
          j["completions"] = nlohmann::json::array();
          for (const auto& c : infer_completions(sa.alignment)) {
            j["completions"].push_back({{"symbol", std::string(c.symbol.name())}, {"column", c.column}});
          }
        }
        alignments.push_back(std::move(j));
      }
      r["alignments"] = std::move(alignments);
      results.push_back(std::move(r));
      continue;
    }
    out << "NEW " << n->id() << ": " << join(n->symbols()) << '\n';
    if (ranked.empty()) out << "no alignment\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      const auto& sa = ranked[i];
      out << "\nalignment " << i + 1 << ": cd " << num(sa.score.cd) << ", b_new " << num(sa.score.b_new)
          << ", b_enc " << num(sa.score.b_enc) << ", p " << num(sa.probability) << '\n';
      out << render(sa.alignment, recognise ? Orientation::Rows : Orientation::Columns);
      out << "code: " << join(derive_encoding(sa.alignment, costs).symbols) << '\n';
      if (recognise) {
        auto completions = infer_completions(sa.alignment);
        out << "completions:";
        for (const auto& c : completions) out << ' ' << c.symbol.name() << '@' << c.column;
        out << '\n';
      }
    }
    if (recognise && !ranked.empty()) {
      out << "\ninferences:\n";
      for (const auto& [s, p] : inference_probabilities(ranked)) out << "  " << s.name() << ' ' << num(p) << '\n';
    }
  }
  if (in.opts.format == OutputFormat::Json) out << results.dump(2) << '\n';
  if (!unparsed.empty()) throw DataError("no alignment for " + unparsed);
}

void run_produce(const Inputs& in, std::ostream& out) {
  auto file = load_pattern_file(in.grammar);
  auto code = split_symbols(in.code);
  if (code.empty()) throw std::invalid_argument("empty code");
  Corpus c;
  add_new(c, code);
  auto costs = symbol_costs(file.grammar, c, in.opts.cost_model, in.opts.literal_factor);
  auto surface = decode(code, file.grammar, costs, in.opts.search);
  if (in.opts.format == OutputFormat::Json) {
    nlohmann::json j{{"code", nlohmann::json::array()}, {"surface", nlohmann::json::array()}};
    for (auto s : code) j["code"].push_back(std::string(s.name()));
    for (auto s : surface) j["surface"].push_back(std::string(s.name()));
    out << j.dump(2) << '\n';
  } else {
    out << join(surface) << '\n';
  }
}

LearnParams learn_params(const Inputs& in) {
  LearnParams p;
  p.search = in.opts.search;
  p.cost_model = in.opts.cost_model;
  p.literal_factor = in.opts.literal_factor;
  p.max_grammars_kept = in.max_grammars;
  p.max_iterations = in.max_iterations;
  p.validate();
  return p;
}

void run_score(const Inputs& in, std::ostream& out) {
  auto g = load_pattern_file(in.grammar).grammar;
  auto c = load_pattern_file(in.corpus).corpus;
  auto s = grammar_score(g, c, learn_params(in));
  if (in.opts.format == OutputFormat::Json) {
    out << score_json(s).dump(2) << '\n';
  } else {
    out << "g_size " << num(s.g_size) << "\ne_size " << num(s.e_size) << "\ntotal " << num(s.total) << '\n';
  }
}

void run_learn(const Inputs& in, std::ostream& out) {
  auto c = load_pattern_file(in.corpus).corpus;
  if (c.empty()) throw DataError("corpus has no New patterns");
  auto result = learn(c, learn_params(in));
  if (result.grammars.empty()) throw DataError("no grammar learned");
  auto text = serialize(result.grammars.front().grammar);
  if (!in.out.empty()) write_file(in.out, text);
  if (in.opts.format == OutputFormat::Json) {
    out << learn_summary_json(result).dump(2) << '\n';
    return;
  }
  for (std::size_t i = 0; i < result.grammars.size(); ++i) {
    const auto& sg = result.grammars[i];
    out << "grammar " << i + 1 << ": " << sg.grammar.size() << " patterns, g_size " << num(sg.score.g_size)
        << ", e_size " << num(sg.score.e_size) << ", total " << num(sg.score.total) << '\n';
  }
  out << "residual:";
  for (std::size_t i = 0; i < result.residual_discarded.size(); ++i) {
    out << (i ? ", " : " ") << result.residual_discarded[i];  // ids may contain spaces
  }
  out << '\n';
  if (in.out.empty()) out << '\n' << text;
}

void add_common(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--beam-width", in.opts.search.beam_width, "Alignments kept per stage")->capture_default_str();
  cmd->add_option("--max-alternatives", in.opts.search.max_alternatives, "Alignments returned")
      ->capture_default_str();
  cmd->add_option("--depth", in.opts.search.depth, "Matchings kept per pattern")->capture_default_str();
  cmd->add_option("--top-k", in.opts.top_k, "Alignments printed")->capture_default_str();
  cmd->add_option("--cost", in.cost, "Cost model")->check(CLI::IsMember({"unit", "frequency"}))->capture_default_str();
  cmd->add_option("--literal-factor", in.opts.literal_factor, "Cost multiplier for raw data symbols")
      ->capture_default_str();
  cmd->add_option("--format", in.format, "Output format")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Inputs in;
  CLI::App app{"SP pattern matching, parsing and grammar learning", "spm"};
  app.require_subcommand(1);

  auto* parse = app.add_subcommand("parse", "Build alignments of New patterns against a grammar");
  auto* recognise = app.add_subcommand("recognise", "Parse with row layout, completions and inferences");
  for (auto* cmd : {parse, recognise}) {
    cmd->add_option("--grammar", in.grammar, "Pattern file with Old patterns")->required();
    auto* inl = cmd->add_option("--new", in.new_inline, "Inline New pattern, whitespace-separated");
    cmd->add_option("--new-file", in.new_file, "Pattern file whose NEW lines are parsed")->excludes(inl);
    add_common(cmd, in);
  }
  auto* learn_cmd = app.add_subcommand("learn", "Learn a grammar from a corpus");
  learn_cmd->add_option("--corpus", in.corpus, "Pattern file with NEW lines")->required();
  learn_cmd->add_option("--out", in.out, "Where to write the best grammar");
  learn_cmd->add_option("--max-grammars", in.max_grammars, "Grammars kept")->capture_default_str();
  learn_cmd->add_option("--max-iterations", in.max_iterations, "Stages of the grammar search")->capture_default_str();
  add_common(learn_cmd, in);
  auto* produce = app.add_subcommand("produce", "Decode a code into its surface pattern");
  produce->add_option("--grammar", in.grammar, "Pattern file with Old patterns")->required();
  produce->add_option("--code", in.code, "Code symbols, whitespace-separated")->required();
  add_common(produce, in);
  auto* score = app.add_subcommand("score", "Score a grammar against a corpus");
  score->add_option("--grammar", in.grammar, "Pattern file with Old patterns")->required();
  score->add_option("--corpus", in.corpus, "Pattern file with NEW lines")->required();
  add_common(score, in);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  try {
    finish_options(in);
    if (parse->parsed()) run_parse(in, false, out);
    if (recognise->parsed()) run_parse(in, true, out);
    if (learn_cmd->parsed()) run_learn(in, out);
    if (produce->parsed()) run_produce(in, out);
    if (score->parsed()) run_score(in, out);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const FileError& e) {
    err << "file error: " << e.what() << '\n';
    return 3;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace spm::cli
