#pragma once

#include <array>
#include <cstdint>

namespace coevo {

/// SplitMix64 finaliser. Used to expand seeds and to derive child streams.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Deterministic pseudo-random stream: xoshiro256** whose 256-bit state is
/// filled from four consecutive SplitMix64 outputs of the seed.
///
/// Every derived quantity (bounded integers, unit doubles) is computed with
/// integer arithmetic or exact IEEE operations only, so a given seed yields
/// the same sequence on every platform and standard library. See
/// docs/random.md for the full algorithm and constants.
///
/// A stream is single-owner; spawn independent streams for parallel work.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept;

  std::uint64_t next_u64() noexcept;

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection;
  /// bound must be positive.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() noexcept;

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  std::uint64_t seed() const noexcept { return seed_; }

  // UniformRandomBitGenerator surface, for std::shuffle-style algorithms.
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }
  result_type operator()() noexcept { return next_u64(); }

 private:
  std::array<std::uint64_t, 4> state_{};
  std::uint64_t seed_;
};

/// Child stream number `index` of `seed`. The child seed is
/// mix64(mix64(seed) ^ mix64(index + 0x9E3779B97F4A7C15)).
RandomStream spawn_stream(std::uint64_t seed, std::uint64_t index) noexcept;

/// The seed `spawn_stream(seed, index)` is constructed from.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace coevo
