#include "spm/pattern.hpp"

#include <stdexcept>

namespace spm {

Pattern Pattern::make_new(std::string id, std::vector<Symbol> symbols) {
  if (symbols.empty()) throw std::invalid_argument("New pattern must not be empty");
  Pattern p;
  p.id_ = std::move(id);
  p.role_ = Role::New;
  p.symbols_ = std::move(symbols);
  return p;
}

Pattern Pattern::make_old(std::string id, std::vector<Symbol> head, std::vector<Symbol> contents,
                          std::vector<Symbol> tail, std::uint64_t frequency) {
  if (head.empty()) throw std::invalid_argument("Old pattern needs a non-empty ID head");
  if (head.size() + contents.size() + tail.size() < 2) {
    throw std::invalid_argument("Old pattern must hold at least two symbols");
  }
  if (frequency == 0) throw std::invalid_argument("pattern frequency must be positive");
  Pattern p;
  p.role_ = Role::Old;
  p.frequency_ = frequency;
  p.head_len_ = head.size();
  p.tail_len_ = tail.size();
  p.symbols_ = std::move(head);
  p.symbols_.insert(p.symbols_.end(), contents.begin(), contents.end());
  p.symbols_.insert(p.symbols_.end(), tail.begin(), tail.end());
  p.id_ = id.empty() ? join_symbols(p.head()) : std::move(id);
  return p;
}

Segment Pattern::segment(std::size_t pos) const {
  if (pos < head_len_) return Segment::Head;
  if (pos >= symbols_.size() - tail_len_) return Segment::Tail;
  return Segment::Contents;
}

Pattern Pattern::with_frequency(std::uint64_t frequency) const {
  if (frequency == 0) throw std::invalid_argument("pattern frequency must be positive");
  Pattern p = *this;
  p.frequency_ = frequency;
  return p;
}

Pattern Pattern::with_id(std::string id) const {
  Pattern p = *this;
  p.id_ = std::move(id);
  return p;
}

std::string Pattern::to_string() const {
  if (role_ == Role::New) return join_symbols(symbols_);
  std::string out = join_symbols(head());
  out += " | ";
  out += join_symbols(contents());
  out += " | ";
  out += join_symbols(tail());
  return out;
}

}  // namespace spm
