#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "coevo/bitvector.hpp"
#include "coevo/random.hpp"

namespace coevo {

/// Non-empty array of equal-length strategies.
class Population {
 public:
  /// Throws std::invalid_argument when empty or when lengths differ.
  explicit Population(std::vector<BitVector> members);

  std::size_t size() const noexcept { return members_.size(); }
  std::size_t genome_length() const noexcept { return members_.front().size(); }

  const BitVector& operator[](std::size_t i) const noexcept { return members_[i]; }
  BitVector& operator[](std::size_t i) noexcept { return members_[i]; }

  auto begin() const noexcept { return members_.begin(); }
  auto end() const noexcept { return members_.end(); }

  const std::vector<BitVector>& members() const noexcept { return members_; }

  /// One-count of every member, in order.
  std::vector<std::size_t> one_counts() const;

  friend bool operator==(const Population&, const Population&) = default;

 private:
  std::vector<BitVector> members_;
};

/// Predator population P_t (in X) and prey population Q_t (in Y) at
/// generation t. Both populations have the same size and genome length.
struct PairedPopulations {
  PairedPopulations(Population predators, Population prey, std::uint64_t generation = 0);

  std::size_t lambda() const noexcept { return predators.size(); }
  std::size_t genome_length() const noexcept { return predators.genome_length(); }

  Population predators;
  Population prey;
  std::uint64_t generation;

  friend bool operator==(const PairedPopulations&, const PairedPopulations&) = default;
};

Population uniform_population(std::size_t lambda, std::size_t n, RandomStream& rng);

/// Population whose i-th member has exactly counts[i] leading 1-bits.
Population population_from_counts(const std::vector<std::size_t>& counts, std::size_t n);

}  // namespace coevo
