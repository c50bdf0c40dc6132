#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace coevo {

struct Theorem3Inputs {
  std::size_t m = 1;
  std::size_t lambda = 1;
  double delta = 1.0;
  std::vector<double> z;  // z_1 .. z_{m-1}
  double c_pp = 1.0;
};

/// (c'' lambda / delta) (m lambda^2 + 16 sum_{i<m} 1/z_i), term by term.
struct Theorem3Bound {
  double prefactor;   // c'' lambda / delta
  double level_term;  // m lambda^2
  double sum_term;    // 16 sum 1/z_i
  double value;
};

/// Throws std::invalid_argument for m or lambda zero, delta outside (0, 1],
/// c'' < 1, a z list whose length is not m - 1, or any z_i <= 0.
Theorem3Bound theorem3_bound(const Theorem3Inputs& in);

/// chi = ln(42 / (41 (1 + delta))) / 2 for delta in (0, 1/41).
double theorem9_chi(double delta);

/// Inverse of theorem9_chi: delta = (42/41) e^{-2 chi} - 1. Throws unless
/// the result lies in (0, 1/41).
double theorem9_delta(double chi);

struct Theorem9Inputs {
  std::size_t n = 1;
  std::size_t lambda = 1;
  double chi = 0.01;
  double alpha = 0.9;
  double beta = 0.05;
  double epsilon = 0.1;
  double r = 1.0;
  double c_pp = 1.0;
};

/// (2 r c'' lambda / delta) (lambda^2 n + (23 n / chi) ln(1 / (beta (1 - alpha + eps))))
/// with delta derived from chi.
struct Theorem9Budget {
  double delta;
  double prefactor;       // 2 r c'' lambda / delta
  double population_term; // lambda^2 n
  double mutation_term;   // (23 n / chi) ln(...)
  double value;           // interactions
  double generations() const noexcept;
  std::size_t lambda;
};

/// Throws std::invalid_argument when beta (1 - alpha + eps) is not in
/// (0, 1), when chi does not correspond to a delta in (0, 1/41), or when r,
/// c'' or the sizes are out of range.
Theorem9Budget theorem9_budget(const Theorem9Inputs& in);

/// ln 2 / (1 - 2 delta) for delta in (0, 1/2).
double error_threshold(double delta);

struct InequalityCheck {
  std::string name;
  std::uint64_t points = 0;
  std::uint64_t violations = 0;
  std::string detail;
  bool pass() const noexcept { return points > 0 && violations == 0; }
};

/// Square-root sandwich
///   (3 delta - 4 delta1)/11 < 1 - sqrt((1 + delta1)/(1 + delta)) < (4 delta - 3 delta1)/8
/// on a grid x grid points of delta in (0, 1), delta1 in [0, delta).
InequalityCheck check_sqrt_sandwich(std::size_t grid = 1000);

/// 1 - (1 - x)^n >= 1 - e^{-xn} >= xn / (1 + xn) on x in [0, 1], n in [1, n_max].
InequalityCheck check_power_exponential(std::size_t x_steps = 1000, std::size_t n_max = 200);

/// Monte Carlo of E[e^{-eta X Y}] <= e^{-eta z lambda^2} for independent
/// X ~ Bin(lambda, p), Y ~ Bin(lambda, q) with pq >= (1 + sigma)^2 z and
/// eta = sigma / ((1 + sigma) lambda). Fails only beyond six standard errors.
struct ProductMgfCase {
  std::size_t lambda;
  double p;
  double q;
  double z;
};

InequalityCheck check_product_mgf(const std::vector<ProductMgfCase>& cases, std::size_t samples,
                                  std::uint64_t seed);

/// Runs all three checkers with their default grids.
std::vector<InequalityCheck> check_inequality_lemmas(std::size_t mgf_samples = 1000000,
                                                     std::uint64_t seed = 12);

}  // namespace coevo
