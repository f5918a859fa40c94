#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "spm/errors.hpp"
#include "spm/grammar.hpp"

namespace spm {
namespace {

std::string_view trim(std::string_view s) {
  const char* ws = " \t\r\n\f\v";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<Symbol> symbols_on_line(std::string_view field, std::size_t line) {
  std::vector<Symbol> out;
  std::istringstream in{std::string(field)};
  std::string tok;
  while (in >> tok) {
    if (!is_valid_symbol_name(tok)) throw ParseError(line, "invalid symbol '" + tok + "'");
    out.emplace_back(tok);
  }
  return out;
}

std::uint64_t parse_frequency(std::string_view field, std::size_t line) {
  field = trim(field);
  if (field.empty()) return 1;
  std::uint64_t f = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), f);
  if (ec != std::errc{} || ptr != field.data() + field.size() || f == 0) {
    throw ParseError(line, "frequency must be a positive integer, got '" + std::string(field) + "'");
  }
  return f;
}

Pattern parse_old(std::string_view rest, std::size_t line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    auto bar = rest.find('|', start);
    fields.push_back(rest.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (fields.size() != 4) {
    throw ParseError(line, "OLD line needs 'freq | head | contents | tail'");
  }
  auto freq = parse_frequency(fields[0], line);
  auto head = symbols_on_line(fields[1], line);
  auto contents = symbols_on_line(fields[2], line);
  auto tail = symbols_on_line(fields[3], line);
  if (head.empty()) throw ParseError(line, "OLD line with empty ID head");
  try {
    return Pattern::make_old("", std::move(head), std::move(contents), std::move(tail), freq);
  } catch (const std::invalid_argument& e) {
    throw ParseError(line, e.what());
  }
}

void write_pattern(std::ostringstream& out, const Pattern& p) {
  if (p.role() == Role::New) {
    out << "NEW " << join_symbols(p.symbols()) << '\n';
    return;
  }
  out << "OLD " << p.frequency() << " | " << join_symbols(p.head()) << " | " << join_symbols(p.contents())
      << " | " << join_symbols(p.tail()) << '\n';
}

}  // namespace

PatternPtr Grammar::find(std::string_view id) const {
  for (const auto& p : patterns) {
    if (p->id() == id) return p;
  }
  return nullptr;
}

void add_new(Corpus& corpus, std::vector<Symbol> symbols) {
  corpus.news.push_back(share(Pattern::make_new("new" + std::to_string(corpus.news.size() + 1), std::move(symbols))));
}

PatternFile parse_pattern_file(std::string_view text) {
  PatternFile file;
  std::set<std::string, std::less<>> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto line = trim(raw);
    if (line.empty() || line.front() == ';') continue;
    auto sp = line.find_first_of(" \t");
    auto keyword = line.substr(0, sp);
    auto rest = sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1);

    if (keyword == "NEW") {
      auto syms = symbols_on_line(rest, line_no);
      if (syms.empty()) throw ParseError(line_no, "NEW line with no symbols");
      add_new(file.corpus, std::move(syms));
    } else if (keyword == "OLD") {
      Pattern p = parse_old(rest, line_no);
      if (!ids.insert(p.id()).second) throw ParseError(line_no, "duplicate pattern id '" + p.id() + "'");
      file.grammar.patterns.push_back(share(std::move(p)));
    } else {
      throw ParseError(line_no, "expected NEW or OLD, got '" + std::string(keyword) + "'");
    }
  }
  return file;
}

PatternFile load_pattern_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw FileError("error reading '" + path + "'");
  return parse_pattern_file(buf.str());
}

std::string serialize(const PatternFile& file) {
  std::ostringstream out;
  for (const auto& p : file.corpus.news) write_pattern(out, *p);
  for (const auto& p : file.grammar.patterns) write_pattern(out, *p);
  return out.str();
}

std::string serialize(const Grammar& grammar) {
  std::ostringstream out;
  if (!grammar.name.empty()) out << "; " << grammar.name << '\n';
  for (const auto& p : grammar.patterns) write_pattern(out, *p);
  return out.str();
}

std::vector<Diagnostic> validate_grammar(const Grammar& g) {
  std::vector<Diagnostic> out;
  std::unordered_map<std::string, int> id_seen;
  std::unordered_map<std::string, int> head_seen;
  for (const auto& p : g.patterns) {
    if (p->role() != Role::Old) {
      out.push_back({p->id(), "grammar pattern is not Old"});
      continue;
    }
    auto head = join_symbols(p->head());
    bool dup_id = id_seen[p->id()]++ > 0;
    bool dup_head = head_seen[head]++ > 0;
    // ids default to the joined head, so one clash usually trips both checks
    if (dup_head) {
      out.push_back({p->id(), "duplicate ID head '" + head + "'"});
    } else if (dup_id) {
      out.push_back({p->id(), "duplicate pattern id"});
    }
  }
  return out;
}

bool is_id_symbol(const Grammar& g, Symbol s) {
  for (const auto& p : g.patterns) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      if (p->is_id(i) && (*p)[i] == s) return true;
    }
  }
  return false;
}

std::unordered_set<Symbol> id_symbols(const Grammar& g) {
  std::unordered_set<Symbol> out;
  for (const auto& p : g.patterns) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      if (p->is_id(i)) out.insert((*p)[i]);
    }
  }
  return out;
}

std::vector<Symbol> alphabet(const Grammar& g, const Corpus& c) {
  std::vector<Symbol> out;
  std::unordered_set<Symbol> seen;
  auto add = [&](const Pattern& p) {
    for (Symbol s : p.symbols()) {
      if (seen.insert(s).second) out.push_back(s);
    }
  };
  for (const auto& p : g.patterns) add(*p);
  for (const auto& p : c.news) add(*p);
  return out;
}

}  // namespace spm
