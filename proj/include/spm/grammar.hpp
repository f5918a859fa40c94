#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "spm/pattern.hpp"

namespace spm {

struct Grammar {
  std::vector<PatternPtr> patterns;
  std::string name;

  bool empty() const { return patterns.empty(); }
  std::size_t size() const { return patterns.size(); }
  /// nullptr when no pattern has this id.
  PatternPtr find(std::string_view id) const;
};

struct Corpus {
  std::vector<PatternPtr> news;

  bool empty() const { return news.empty(); }
  std::size_t size() const { return news.size(); }
};

struct PatternFile {
  Corpus corpus;
  Grammar grammar;
};

/// Parses the line-oriented pattern file format:
///   ; comment
///   NEW sym sym ...
///   OLD <freq> | head syms | contents syms | tail syms
/// Throws ParseError carrying the 1-based line number.
PatternFile parse_pattern_file(std::string_view text);

/// Reads and parses a file; throws FileError when it cannot be read.
PatternFile load_pattern_file(const std::string& path);

std::string serialize(const PatternFile& file);
std::string serialize(const Grammar& grammar);

/// Appends New patterns with ids new1, new2, ... continuing after the
/// corpus's current size.
void add_new(Corpus& corpus, std::vector<Symbol> symbols);

struct Diagnostic {
  std::string subject;  // pattern id, or row/column for alignments
  std::string message;
};

/// Empty iff every pattern is Old, ids are unique and full ID-heads are unique.
std::vector<Diagnostic> validate_grammar(const Grammar& g);

/// True if the symbol occurs in the head or tail of some pattern, i.e. it
/// can act as a reference to a pattern rather than as data.
bool is_id_symbol(const Grammar& g, Symbol s);
std::unordered_set<Symbol> id_symbols(const Grammar& g);

std::vector<Symbol> alphabet(const Grammar& g, const Corpus& c);

}  // namespace spm
