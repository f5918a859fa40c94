#pragma once

#include <span>
#include <string>
#include <vector>

#include "spm/bitset.hpp"
#include "spm/grammar.hpp"
#include "spm/matcher.hpp"

namespace spm {

struct RowRef {
  std::string pattern_id;
  std::size_t instance = 0;
  friend bool operator==(const RowRef&, const RowRef&) = default;
};

/// One symbol occurrence: position `pos` of row `row`.
struct Cell {
  std::size_t row = 0;
  std::size_t pos = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// A multiple alignment: row 0 is the New pattern, rows 1.. are Old pattern
/// instances, and columns (in a total order consistent with every row) hold
/// cells whose symbols are unified. Immutable once built.
class Alignment {
 public:
  /// The single-row alignment of a New pattern.
  static Alignment from_new(PatternPtr new_pattern);

  /// Assembles an alignment from explicit parts without checking it; use
  /// validate_alignment on the result.
  static Alignment from_columns(PatternPtr new_pattern, std::vector<std::pair<RowRef, PatternPtr>> old_rows,
                                std::vector<std::vector<Cell>> columns);

  std::size_t row_count() const { return rows_.size(); }
  const Pattern& row(std::size_t r) const { return *rows_[r]; }
  const PatternPtr& row_ptr(std::size_t r) const { return rows_[r]; }
  RowRef ref(std::size_t r) const { return {rows_[r]->id(), instance_[r]}; }
  std::size_t instance(std::size_t r) const { return instance_[r]; }
  const Pattern& new_row() const { return *rows_[0]; }

  std::size_t column_count() const { return col_start_.size() - 1; }
  std::span<const Cell> column(std::size_t c) const {
    return std::span(cells_).subspan(col_start_[c], col_start_[c + 1] - col_start_[c]);
  }
  /// Column index holding (row, pos).
  std::size_t column_of(std::size_t row, std::size_t pos) const { return placement_[row_start_[row] + pos]; }
  Symbol symbol_at(const Cell& cell) const { return (*rows_[cell.row])[cell.pos]; }
  Symbol column_symbol(std::size_t c) const { return symbol_at(cells_[col_start_[c]]); }

  std::size_t column_size(std::size_t c) const { return col_start_[c + 1] - col_start_[c]; }
  bool is_hit(std::size_t c) const { return column_size(c) >= 2; }
  bool has_cell_of_row(std::size_t c, std::size_t row) const;
  bool is_new_hit(std::size_t c) const { return is_hit(c) && has_cell_of_row(c, 0); }
  bool has_new_hit() const;
  bool is_matched(std::size_t row, std::size_t pos) const { return is_hit(column_of(row, pos)); }

  std::size_t instances_of(const std::string& pattern_id) const;
  /// Next free instance number for a pattern.
  RowRef next_ref(const Pattern& p) const { return {p.id(), instances_of(p.id())}; }

  /// For each column, the set of columns every row forces to precede it.
  std::vector<DynBitset> column_ancestors() const;

  /// Cells in hit columns.
  std::size_t hit_cells() const;
  /// Old-row cells standing alone in their column.
  std::size_t loose_old_cells() const;
  /// Sum over rows of the number of maximal runs of matched positions.
  std::size_t fragmentation() const;

  /// Canonical text for the hit structure: each hit column as the sorted
  /// multiset of (pattern id, position) labels, plus the multiset of row
  /// patterns. Alignments differing only in instance numbering or in the
  /// order of unmatched material share a signature.
  std::string signature() const;

 private:
  void rebuild_placement();

  // cells are stored column by column; col_start_ has column_count()+1 entries
  std::vector<PatternPtr> rows_;
  std::vector<std::size_t> instance_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> col_start_{0};
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> placement_;

  friend Alignment merge(const Alignment&, const RowRef&, const PatternPtr&, const MatchSet&);
};

/// Adds one Old pattern instance. ms pairs are (column of base, position in
/// the pattern). Unmatched symbols of the pattern get fresh columns next to
/// their anchors. Throws AlignmentError on an empty MatchSet, a RowRef that
/// is already present or not the next instance, unequal symbols, an
/// ordering conflict, or if the result has no hit involving the New row.
Alignment merge(const Alignment& base, const RowRef& ref, const PatternPtr& pattern, const MatchSet& ms);

/// Empty iff every alignment invariant holds.
std::vector<Diagnostic> validate_alignment(const Alignment& a);

/// The set of hit columns as sorted (pattern id or "NEW", position) label
/// lists; used to compare alignments with reference layouts.
using HitColumn = std::vector<std::pair<std::string, std::size_t>>;
std::vector<HitColumn> hit_structure(const Alignment& a);

/// An Old row whose class symbol is not unified with another Old row is a
/// root; a rooted alignment has exactly one.
std::size_t root_count(const Alignment& a);

}  // namespace spm
