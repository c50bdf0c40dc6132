#include "coevo/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "coevo/random.hpp"

namespace coevo {

Theorem3Bound theorem3_bound(const Theorem3Inputs& in) {
  if (in.m == 0 || in.lambda == 0) throw std::invalid_argument("theorem3: m and lambda must be >= 1");
  if (!(in.delta > 0.0 && in.delta <= 1.0)) {
    throw std::invalid_argument(fmt::format("theorem3: delta={} outside (0,1]", in.delta));
  }
  if (!(in.c_pp >= 1.0)) throw std::invalid_argument("theorem3: c'' must be >= 1");
  if (in.z.size() != in.m - 1) {
    throw std::invalid_argument(
        fmt::format("theorem3: expected {} z values, got {}", in.m - 1, in.z.size()));
  }
  double inv_sum = 0.0;
  for (double zi : in.z) {
    if (!(zi > 0.0)) throw std::invalid_argument(fmt::format("theorem3: z={} must be positive", zi));
    inv_sum += 1.0 / zi;
  }
  const auto lambda = static_cast<double>(in.lambda);
  Theorem3Bound b{};
  b.prefactor = in.c_pp * lambda / in.delta;
  b.level_term = static_cast<double>(in.m) * lambda * lambda;
  b.sum_term = 16.0 * inv_sum;
  b.value = b.prefactor * (b.level_term + b.sum_term);
  return b;
}

double theorem9_chi(double delta) {
  if (!(delta > 0.0 && delta < 1.0 / 41.0)) {
    throw std::invalid_argument(fmt::format("theorem9_chi: delta={} outside (0, 1/41)", delta));
  }
  return 0.5 * std::log(42.0 / (41.0 * (1.0 + delta)));
}

double theorem9_delta(double chi) {
  const double delta = (42.0 / 41.0) * std::exp(-2.0 * chi) - 1.0;
  if (!(delta > 0.0 && delta < 1.0 / 41.0)) {
    throw std::invalid_argument(
        fmt::format("theorem9_delta: chi={} gives delta={} outside (0, 1/41)", chi, delta));
  }
  return delta;
}

double Theorem9Budget::generations() const noexcept {
  return value / static_cast<double>(lambda);
}

Theorem9Budget theorem9_budget(const Theorem9Inputs& in) {
  if (in.n == 0 || in.lambda == 0) throw std::invalid_argument("theorem9: n and lambda must be >= 1");
  if (!(in.r > 0.0)) throw std::invalid_argument("theorem9: r must be positive");
  if (!(in.c_pp >= 1.0)) throw std::invalid_argument("theorem9: c'' must be >= 1");
  const double base = in.beta * (1.0 - in.alpha + in.epsilon);
  if (!(base > 0.0 && base < 1.0)) {
    throw std::invalid_argument(
        fmt::format("theorem9: beta (1 - alpha + epsilon) = {} must lie in (0,1)", base));
  }
  const auto n = static_cast<double>(in.n);
  const auto lambda = static_cast<double>(in.lambda);
  Theorem9Budget b{};
  b.lambda = in.lambda;
  b.delta = theorem9_delta(in.chi);
  b.prefactor = 2.0 * in.r * in.c_pp * lambda / b.delta;
  b.population_term = lambda * lambda * n;
  b.mutation_term = 23.0 * n / in.chi * std::log(1.0 / base);
  b.value = b.prefactor * (b.population_term + b.mutation_term);
  return b;
}

double error_threshold(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw std::invalid_argument(fmt::format("error_threshold: delta={} outside (0, 1/2)", delta));
  }
  return std::numbers::ln2 / (1.0 - 2.0 * delta);
}

InequalityCheck check_sqrt_sandwich(std::size_t grid) {
  InequalityCheck c{"sqrt-sandwich", 0, 0, {}};
  const auto g = static_cast<double>(grid);
  for (std::size_t i = 1; i <= grid; ++i) {
    const double delta = static_cast<double>(i) / (g + 1.0);
    for (std::size_t j = 0; j < grid; ++j) {
      const double delta1 = delta * static_cast<double>(j) / g;
      const double mid = -std::expm1(0.5 * (std::log1p(delta1) - std::log1p(delta)));
      const double lo = (3.0 * delta - 4.0 * delta1) / 11.0;
      const double hi = (4.0 * delta - 3.0 * delta1) / 8.0;
      ++c.points;
      if (!(lo < mid && mid < hi)) {
        if (c.violations++ == 0) {
          c.detail = fmt::format("delta={} delta1={}: {} < {} < {} fails", delta, delta1, lo, mid, hi);
        }
      }
    }
  }
  return c;
}

InequalityCheck check_power_exponential(std::size_t x_steps, std::size_t n_max) {
  InequalityCheck c{"power-exponential", 0, 0, {}};
  // Four ulps of slack where the chain is tight (x n -> 0).
  constexpr double slack = 4.0 * 2.220446049250313e-16;
  for (std::size_t i = 0; i <= x_steps; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(x_steps);
    for (std::size_t n = 1; n <= n_max; ++n) {
      const double xn = x * static_cast<double>(n);
      const double lhs = x == 1.0 ? 1.0 : -std::expm1(static_cast<double>(n) * std::log1p(-x));
      const double mid = -std::expm1(-xn);
      const double rhs = xn / (1.0 + xn);
      ++c.points;
      if (!(lhs >= mid * (1.0 - slack) && mid >= rhs * (1.0 - slack))) {
        if (c.violations++ == 0) {
          c.detail = fmt::format("x={} n={}: {} >= {} >= {} fails", x, n, lhs, mid, rhs);
        }
      }
    }
  }
  return c;
}

InequalityCheck check_product_mgf(const std::vector<ProductMgfCase>& cases, std::size_t samples,
                                  std::uint64_t seed) {
  InequalityCheck c{"product-mgf", 0, 0, {}};
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    const auto& k = cases[ci];
    const double sigma = std::sqrt(k.p * k.q / k.z) - 1.0;
    if (!(sigma > 0.0)) {
      throw std::invalid_argument(fmt::format("product-mgf: pq={} not above z={}", k.p * k.q, k.z));
    }
    const auto lambda = static_cast<double>(k.lambda);
    const double eta = sigma / ((1.0 + sigma) * lambda);
    RandomStream rng = spawn_stream(seed, ci);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
      std::size_t x = 0;
      std::size_t y = 0;
      for (std::size_t i = 0; i < k.lambda; ++i) x += rng.bernoulli(k.p) ? 1 : 0;
      for (std::size_t i = 0; i < k.lambda; ++i) y += rng.bernoulli(k.q) ? 1 : 0;
      const double v = std::exp(-eta * static_cast<double>(x * y));
      sum += v;
      sum_sq += v * v;
    }
    const auto ns = static_cast<double>(samples);
    const double mean = sum / ns;
    const double se = std::sqrt(std::max(0.0, sum_sq / ns - mean * mean) / ns);
    const double bound = std::exp(-eta * k.z * lambda * lambda);
    ++c.points;
    if (mean - 6.0 * se > bound) {
      ++c.violations;
      c.detail += fmt::format("lambda={} p={} q={} z={}: mean {} (se {}) > {}; ", k.lambda, k.p,
                              k.q, k.z, mean, se, bound);
    }
  }
  return c;
}

std::vector<InequalityCheck> check_inequality_lemmas(std::size_t mgf_samples, std::uint64_t seed) {
  const std::vector<ProductMgfCase> cases{
      {20, 0.9, 0.9, 0.5}, {20, 0.6, 0.8, 0.3}, {10, 0.5, 0.5, 0.2}, {40, 0.95, 0.7, 0.5},
  };
  return {check_sqrt_sandwich(), check_power_exponential(),
          check_product_mgf(cases, mgf_samples, seed)};
}

}  // namespace coevo
