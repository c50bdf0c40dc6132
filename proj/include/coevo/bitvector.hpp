#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coevo/random.hpp"

namespace coevo {

/// Fixed-length binary strategy packed into 64-bit words. The length is set
/// at construction and never changes; unused high bits of the last word are
/// kept zero so word-level popcounts are exact.
class BitVector {
 public:
  /// All-zero vector of length n. Throws std::invalid_argument for n == 0.
  explicit BitVector(std::size_t n);

  /// Parses a string of '0'/'1' characters, bit 0 first.
  static BitVector from_string(std::string_view bits);
  static BitVector filled(std::size_t n, bool value);

  std::size_t size() const noexcept { return n_; }

  bool test(std::size_t i) const noexcept {
    return ((words_[i >> 6] >> (i & 63)) & 1U) != 0;
  }
  bool operator[](std::size_t i) const noexcept { return test(i); }

  void set(std::size_t i, bool value) noexcept;
  void flip(std::size_t i) noexcept { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }
  void flip_all() noexcept;

  BitVector complement() const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  std::span<std::uint64_t> words() noexcept { return words_; }

  std::string to_string() const;

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  void clear_tail() noexcept;

  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

/// Number of 1-bits.
std::size_t ones(const BitVector& v) noexcept;

/// Number of positions where u and v differ. Throws std::invalid_argument
/// on a length mismatch.
std::size_t hamming(const BitVector& u, const BitVector& v);

/// Each bit independently 1 with probability 1/2.
BitVector uniform_bitvector(std::size_t n, RandomStream& rng);

}  // namespace coevo
