#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coevo {

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

struct CheckReport {
  std::string suite;
  std::vector<CheckLine> lines;
  bool passed() const noexcept;
};

/// dominates on random bit strings against dominates_by_onecounts for every
/// one-count quadruple in [0, n]^4.
CheckLine check_onecount_equivalence(std::size_t n, double alpha, double beta, std::uint64_t seed);

/// Every pair dominates itself, for every one-count pair in [0, n]^2.
CheckLine check_reflexivity(std::size_t n, double alpha, double beta);

/// intransitivity_witness finds a cycle and is_intransitive_cycle confirms it.
CheckLine check_intransitivity(std::size_t n, double alpha, double beta);

/// Exact half-probability conditionals on random populations whose one-counts
/// are uniform on [0, n]; the games cycle through three (alpha, beta) pairs.
CheckLine check_conditional_halves(std::size_t populations, std::size_t lambda, std::size_t n,
                                   std::uint64_t seed);

/// Monte Carlo frequencies of select_pair against exact enumeration for
/// three pair sets per population, within 6 standard errors.
CheckLine check_selection_oracle(std::size_t populations, std::size_t draws, std::uint64_t seed);

/// Growth inequalities 15 to 19 on constructed populations (lambda = 10,
/// n = 10, no prey in S0) that satisfy each lemma's hypotheses. One line
/// per lemma.
std::vector<CheckLine> check_growth_suite(std::size_t cases_per_game, std::uint64_t seed);

/// Reference g1 + g2 over a 3 x 3 x 3 grid of (lambda, m, z), and the
/// rejection of g(k, j) = k.
std::vector<CheckLine> check_level_function_suite();

std::vector<CheckLine> check_inequality_suite(std::size_t mgf_samples, std::uint64_t seed);

/// Product-count and upgrade probability checks on engineered interactions.
std::vector<CheckLine> check_population_suite(std::size_t samples, std::uint64_t seed);

/// Suite names accepted by run_check_suite, "all" last.
const std::vector<std::string>& check_suite_names();

/// Throws std::invalid_argument for an unknown suite.
CheckReport run_check_suite(std::string_view suite, std::uint64_t seed);

std::string format_report(const CheckReport& report);

}  // namespace coevo
