#include "spm/symbol.hpp"

#include <cctype>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace spm {
namespace {

class Interner {
 public:
  std::uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = index_.find(name); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    if (auto it = index_.find(name); it != index_.end()) return it->second;
    names_.emplace_back(name);
    auto id = static_cast<std::uint32_t>(names_.size());
    index_.emplace(std::string_view(names_.back()), id);
    return id;
  }

  std::string_view name(std::uint32_t id) const {
    if (id == 0) return {};
    std::shared_lock lock(mutex_);
    return names_[id - 1];
  }

 private:
  mutable std::shared_mutex mutex_;
  std::deque<std::string> names_;  // deque keeps string addresses stable
  std::unordered_map<std::string_view, std::uint32_t> index_;
};

Interner& interner() {
  static Interner instance;
  return instance;
}

}  // namespace

bool is_valid_symbol_name(std::string_view name) {
  if (name.empty()) return false;
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '|' || c == ';') return false;
  }
  return true;
}

Symbol::Symbol(std::string_view name) {
  if (!is_valid_symbol_name(name)) {
    throw std::invalid_argument("invalid symbol name '" + std::string(name) + "'");
  }
  id_ = interner().intern(name);
}

std::string_view Symbol::name() const { return interner().name(id_); }

bool symbol_equal(Symbol a, Symbol b) { return a == b; }

std::vector<Symbol> make_symbols(std::string_view text) {
  std::vector<Symbol> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join_symbols(std::span<const Symbol> symbols) {
  std::string out;
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    if (i) out += ' ';
    out += symbols[i].name();
  }
  return out;
}

}  // namespace spm
