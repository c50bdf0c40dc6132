#include "coevo/bitvector.hpp"

#include <bit>
#include <stdexcept>

#include <fmt/format.h>

namespace coevo {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

}  // namespace

BitVector::BitVector(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("BitVector length must be positive");
  words_.assign(word_count(n), 0);
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector v(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(i, true);
    } else if (bits[i] != '0') {
      throw std::invalid_argument(fmt::format("invalid bit character '{}' at {}", bits[i], i));
    }
  }
  return v;
}

BitVector BitVector::filled(std::size_t n, bool value) {
  BitVector v(n);
  if (value) v.flip_all();
  return v;
}

void BitVector::set(std::size_t i, bool value) noexcept {
  const std::uint64_t mask = std::uint64_t{1} << (i & 63);
  if (value) {
    words_[i >> 6] |= mask;
  } else {
    words_[i >> 6] &= ~mask;
  }
}

void BitVector::flip_all() noexcept {
  for (auto& w : words_) w = ~w;
  clear_tail();
}

BitVector BitVector::complement() const {
  BitVector out(*this);
  out.flip_all();
  return out;
}

std::string BitVector::to_string() const {
  std::string s(n_, '0');
  for (std::size_t i = 0; i < n_; ++i) {
    if (test(i)) s[i] = '1';
  }
  return s;
}

void BitVector::clear_tail() noexcept {
  const std::size_t used = n_ & 63;
  if (used != 0) words_.back() &= (std::uint64_t{1} << used) - 1;
}

std::size_t ones(const BitVector& v) noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : v.words()) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t hamming(const BitVector& u, const BitVector& v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument(
        fmt::format("hamming: length mismatch ({} vs {})", u.size(), v.size()));
  }
  const auto a = u.words();
  const auto b = v.words();
  std::size_t total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(a[i] ^ b[i]));
  }
  return total;
}

BitVector uniform_bitvector(std::size_t n, RandomStream& rng) {
  BitVector v(n);
  auto words = v.words();
  for (auto& w : words) w = rng.next_u64();
  const std::size_t used = n & 63;
  if (used != 0) words.back() &= (std::uint64_t{1} << used) - 1;
  return v;
}

}  // namespace coevo
