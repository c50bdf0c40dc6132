#include "coevo/population.hpp"

#include <stdexcept>

#include <fmt/format.h>

namespace coevo {

Population::Population(std::vector<BitVector> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("population must be non-empty");
  const std::size_t n = members_.front().size();
  for (const auto& m : members_) {
    if (m.size() != n) {
      throw std::invalid_argument(
          fmt::format("population members differ in length ({} vs {})", m.size(), n));
    }
  }
}

std::vector<std::size_t> Population::one_counts() const {
  std::vector<std::size_t> counts;
  counts.reserve(members_.size());
  for (const auto& m : members_) counts.push_back(ones(m));
  return counts;
}

PairedPopulations::PairedPopulations(Population predators_in, Population prey_in,
                                     std::uint64_t generation_in)
    : predators(std::move(predators_in)), prey(std::move(prey_in)), generation(generation_in) {
  if (predators.size() != prey.size()) {
    throw std::invalid_argument(fmt::format("population sizes differ ({} predators, {} prey)",
                                            predators.size(), prey.size()));
  }
  if (predators.genome_length() != prey.genome_length()) {
    throw std::invalid_argument("predator and prey genome lengths differ");
  }
}

Population uniform_population(std::size_t lambda, std::size_t n, RandomStream& rng) {
  if (lambda == 0) throw std::invalid_argument("population size must be positive");
  std::vector<BitVector> members;
  members.reserve(lambda);
  for (std::size_t i = 0; i < lambda; ++i) members.push_back(uniform_bitvector(n, rng));
  return Population(std::move(members));
}

Population population_from_counts(const std::vector<std::size_t>& counts, std::size_t n) {
  std::vector<BitVector> members;
  members.reserve(counts.size());
  for (std::size_t c : counts) {
    if (c > n) throw std::invalid_argument(fmt::format("one-count {} exceeds n={}", c, n));
    BitVector v(n);
    for (std::size_t i = 0; i < c; ++i) v.set(i, true);
    members.push_back(std::move(v));
  }
  return Population(std::move(members));
}

}  // namespace coevo
