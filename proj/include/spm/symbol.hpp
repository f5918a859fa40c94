#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace spm {

/// An atomic symbol: a mark that can only be compared for identity with
/// another mark. Names are interned process-wide, so equality is an integer
/// comparison and holds iff the names are byte-identical.
class Symbol {
 public:
  Symbol() = default;

  /// Throws std::invalid_argument if the name is empty or contains
  /// whitespace, '|' or ';'.
  explicit Symbol(std::string_view name);

  std::string_view name() const;
  std::uint32_t id() const { return id_; }
  bool valid() const { return id_ != 0; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }

 private:
  std::uint32_t id_ = 0;
};

bool symbol_equal(Symbol a, Symbol b);

bool is_valid_symbol_name(std::string_view name);

/// Orders symbols by name, for output that must not depend on interning order.
struct SymbolNameLess {
  bool operator()(Symbol a, Symbol b) const { return a.name() < b.name(); }
};

/// Splits on whitespace and interns each token.
std::vector<Symbol> make_symbols(std::string_view text);

std::string join_symbols(std::span<const Symbol> symbols);

}  // namespace spm

template <>
struct std::hash<spm::Symbol> {
  std::size_t operator()(spm::Symbol s) const noexcept { return std::hash<std::uint32_t>{}(s.id()); }
};
