#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "spm/builder.hpp"
#include "spm/learner.hpp"
#include "spm/render.hpp"

namespace spmtest {

using spm::Symbol;

std::string fixture(const std::string& relative);
std::string read_text(const std::string& path);

/// Weight of the heaviest common subsequence, by memoized recursion over
/// prefixes (a different formulation from the library's suffix table).
double hcs_weight(std::span<const Symbol> a, std::span<const Symbol> b, const spm::CostTable& t);

/// Tries every order-preserving pairing; only for inputs of a few symbols.
double brute_hcs_weight(std::span<const Symbol> a, std::span<const Symbol> b, const spm::CostTable& t);

struct Bits {
  double b_new = 0;
  double b_enc = 0;
};
/// Scores an alignment from its columns: New symbols in columns of two or
/// more cells at literal cost; head or tail symbols alone in a column at
/// cost.
Bits score_oracle(const spm::Alignment& a, const spm::CostTable& t);

using Rng = std::mt19937_64;

/// Symbols "s0".."s{alphabet-1}".
std::vector<Symbol> random_sequence(Rng& rng, std::size_t alphabet, std::size_t length);

/// A grammar with one top pattern over two or three classes of distinct words,
/// and a New pattern derived from it by choosing one member per slot.
struct ParseCase {
  spm::Grammar grammar;
  spm::PatternPtr new_pattern;
  std::vector<Symbol> code;  // class and discriminator of each choice
};
ParseCase random_parse_case(Rng& rng);

/// Two or three short sentences built from a shared frame and a few words.
spm::Corpus random_corpus(Rng& rng);

/// A figure fixture: grammar file, which of its New patterns, the layout
/// files of the expected alignment and how they are drawn. With several
/// layouts each must appear among the returned alignments; with one it must
/// be the best.
struct FigureCase {
  std::string name;
  std::string grammar;
  std::size_t new_index = 0;
  std::vector<std::string> layouts;
  spm::Orientation orientation = spm::Orientation::Columns;
};
const std::vector<FigureCase>& figure_cases();

/// Cost table used for every figure: frequency costs, literal factor 8.
spm::CostTable figure_costs(const spm::PatternFile& f);

/// Empty when the case holds, else what went wrong.
std::string check_figure(const FigureCase& fc, const spm::SearchParams& params = {});

spm::PatternPtr old_pattern(const std::string& head, const std::string& contents, const std::string& tail,
                            std::uint64_t freq = 1);
spm::PatternPtr new_pattern(const std::string& text, const std::string& id = "new1");
spm::Grammar grammar_of(std::initializer_list<spm::PatternPtr> patterns);

}  // namespace spmtest
