#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "spm/symbol.hpp"

namespace spm {

enum class Role { New, Old };

/// Which part of an Old pattern a symbol belongs to.
enum class Segment : std::uint8_t { Head, Contents, Tail };

/// A one-dimensional array of symbols. Old patterns carry ID symbols in a
/// head segment (class symbol first, then discriminators) and an optional
/// tail segment; New patterns are contents only.
class Pattern {
 public:
  /// Throws std::invalid_argument when symbols is empty.
  static Pattern make_new(std::string id, std::vector<Symbol> symbols);

  /// Throws std::invalid_argument if head is empty, the total length is
  /// below two, or frequency is zero. An empty id is replaced by the joined
  /// head, which is how patterns are identified in pattern files.
  static Pattern make_old(std::string id, std::vector<Symbol> head, std::vector<Symbol> contents,
                          std::vector<Symbol> tail, std::uint64_t frequency = 1);

  const std::string& id() const { return id_; }
  Role role() const { return role_; }
  std::uint64_t frequency() const { return frequency_; }

  std::span<const Symbol> symbols() const { return symbols_; }
  std::span<const Symbol> head() const { return std::span(symbols_).first(head_len_); }
  std::span<const Symbol> contents() const {
    return std::span(symbols_).subspan(head_len_, symbols_.size() - head_len_ - tail_len_);
  }
  std::span<const Symbol> tail() const { return std::span(symbols_).last(tail_len_); }

  std::size_t size() const { return symbols_.size(); }
  Symbol operator[](std::size_t pos) const { return symbols_[pos]; }
  Segment segment(std::size_t pos) const;
  bool is_id(std::size_t pos) const { return segment(pos) != Segment::Contents; }
  std::size_t contents_begin() const { return head_len_; }
  std::size_t contents_end() const { return symbols_.size() - tail_len_; }

  /// Leading head symbol; invalid Symbol for New patterns.
  Symbol class_symbol() const { return head_len_ ? symbols_[0] : Symbol{}; }

  Pattern with_frequency(std::uint64_t frequency) const;
  Pattern with_id(std::string id) const;

  /// "head | contents | tail" for Old patterns, plain symbols for New.
  std::string to_string() const;

  friend bool operator==(const Pattern&, const Pattern&) = default;

 private:
  Pattern() = default;

  std::string id_;
  Role role_ = Role::New;
  std::vector<Symbol> symbols_;
  std::size_t head_len_ = 0;
  std::size_t tail_len_ = 0;
  std::uint64_t frequency_ = 1;
};

using PatternPtr = std::shared_ptr<const Pattern>;

inline PatternPtr share(Pattern p) { return std::make_shared<const Pattern>(std::move(p)); }

}  // namespace spm
