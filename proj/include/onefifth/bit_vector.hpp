#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "onefifth/rng.hpp"

namespace onefifth {

/// Fixed-length bit string packed into 64-bit words. Bits past `size()` in the
/// last word are kept zero so that word-wise equality and popcounts are exact.
class BitVector {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  BitVector() = default;

  explicit BitVector(std::size_t n, bool value = false)
      : n_(n), words_(word_count(n), value ? ~Word{0} : Word{0}) {
    clear_tail();
  }

  /// Parses a string of '0'/'1' characters, position 0 first.
  static BitVector from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        v.set(i, true);
      } else if (bits[i] != '0') {
        throw std::invalid_argument("BitVector::from_string: expected only '0' and '1'");
      }
    }
    return v;
  }

  static BitVector random(std::size_t n, RngStream& rng) {
    BitVector v(n);
    for (auto& w : v.words_) w = rng();
    v.clear_tail();
    return v;
  }

  std::size_t size() const noexcept { return n_; }

  bool operator[](std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1U; }

  bool at(std::size_t i) const {
    if (i >= n_) throw std::out_of_range("BitVector::at");
    return (*this)[i];
  }

  void set(std::size_t i, bool value) noexcept {
    const Word mask = Word{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= mask;
    } else {
      words_[i / kWordBits] &= ~mask;
    }
  }

  void flip(std::size_t i) noexcept { words_[i / kWordBits] ^= Word{1} << (i % kWordBits); }

  BitVector complement() const {
    BitVector v(*this);
    for (auto& w : v.words_) w = ~w;
    v.clear_tail();
    return v;
  }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (Word w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  const std::vector<Word>& words() const noexcept { return words_; }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
      if ((*this)[i]) s[i] = '1';
    }
    return s;
  }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  static std::size_t word_count(std::size_t n) noexcept { return (n + kWordBits - 1) / kWordBits; }

  void clear_tail() noexcept {
    if (const std::size_t rem = n_ % kWordBits; rem != 0 && !words_.empty()) {
      words_.back() &= (Word{1} << rem) - 1;
    }
  }

  std::size_t n_ = 0;
  std::vector<Word> words_;
};

inline std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  std::size_t d = 0;
  const auto& wa = a.words();
  const auto& wb = b.words();
  for (std::size_t i = 0; i < wa.size(); ++i) d += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
  return d;
}

}  // namespace onefifth
