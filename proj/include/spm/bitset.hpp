#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace spm {

/// Growable bitset used for column sets in the matcher and builder.
class DynBitset {
 public:
  DynBitset() = default;
  explicit DynBitset(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) {
    if (i / 64 >= words_.size()) words_.resize(i / 64 + 1, 0);
    words_[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  bool test(std::size_t i) const {
    return i / 64 < words_.size() && (words_[i / 64] >> (i % 64)) & 1U;
  }
  DynBitset& operator|=(const DynBitset& o) {
    if (o.words_.size() > words_.size()) words_.resize(o.words_.size(), 0);
    for (std::size_t i = 0; i < o.words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  friend bool operator==(const DynBitset& a, const DynBitset& b) {
    const auto& big = a.words_.size() >= b.words_.size() ? a.words_ : b.words_;
    const auto& small = a.words_.size() >= b.words_.size() ? b.words_ : a.words_;
    for (std::size_t i = 0; i < big.size(); ++i) {
      if (big[i] != (i < small.size() ? small[i] : 0)) return false;
    }
    return true;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  std::size_t hash() const {
    std::size_t h = 0xcbf29ce484222325ULL;
    std::size_t last = words_.size();
    while (last > 0 && words_[last - 1] == 0) --last;  // trailing zero words must not change the hash
    for (std::size_t i = 0; i < last; ++i) h = (h ^ words_[i]) * 0x100000001b3ULL;
    return h;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct DynBitsetHash {
  std::size_t operator()(const DynBitset& b) const { return b.hash(); }
};

}  // namespace spm
