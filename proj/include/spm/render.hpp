#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "spm/alignment.hpp"

namespace spm {

enum class Orientation {
  Columns,  // one text column per alignment row, one line per alignment column
  Rows,     // one line per alignment row, '|' markers between matched symbols
};

/// Rows are labelled by index, New first as 0.
std::string render(const Alignment& a, Orientation orientation);

/// What the reader recovers from a rendered layout: each row's symbols in
/// order and the alignment columns (in left-to-right / top-to-bottom order).
struct Layout {
  std::vector<std::string> labels;
  std::vector<std::vector<Symbol>> rows;
  std::vector<std::vector<Cell>> columns;
};

/// Parses text produced by render, or a hand-drawn layout in the same
/// style. Tokens made only of '-' are connectors unless they start exactly
/// at a row's text column. Throws DataError on malformed input.
Layout read_layout(std::string_view text, Orientation orientation);

/// Hit columns of a layout, with each row labelled by the id of the first
/// pattern whose symbols equal the row (row 0 is labelled "NEW"). Throws
/// DataError for a row that matches no pattern.
std::vector<HitColumn> layout_hit_structure(const Layout& layout, const Grammar& g);

}  // namespace spm
