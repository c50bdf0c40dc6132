#include "coevo/levels.hpp"

#include <cmath>

#include <fmt/format.h>

namespace coevo {

namespace {

// Largest integer strictly below t.
std::int64_t below(double t) { return static_cast<std::int64_t>(std::ceil(t)) - 1; }

std::size_t count_in(const Population& pop, const CountInterval& iv) {
  std::size_t c = 0;
  for (const auto& v : pop) {
    if (iv.contains(static_cast<std::int64_t>(ones(v)))) ++c;
  }
  return c;
}

}  // namespace

LevelSequence build_bilinear_levels(const BilinearParams& p) {
  if (p.target_low() < 0.0) {
    throw std::invalid_argument(
        fmt::format("levels: (alpha - epsilon) n = {} is negative", p.target_low()));
  }
  const auto n = static_cast<std::int64_t>(p.n());
  const auto nd = static_cast<double>(n);
  const std::int64_t below_target = below(p.target_low());
  const std::int64_t below_beta = below(p.beta_n());
  const std::int64_t below_alpha = below(p.alpha_n());

  LevelSequence seq;
  seq.levels.push_back({{0, n}, {0, n}, 0, 0});
  const auto m1 = static_cast<std::int64_t>(std::floor(nd - p.beta_n()));
  for (std::int64_t j = 1; j <= m1; ++j) {
    seq.levels.push_back({{0, n - j - 1}, {0, below_target}, 1, j});
  }
  const auto m2 = static_cast<std::int64_t>(std::ceil(p.target_low()));
  for (std::int64_t j = 0; j <= m2; ++j) {
    seq.levels.push_back({{0, below_beta}, {j, below_alpha}, 2, j});
  }
  return seq;
}

std::uint64_t pairs_in_level(const PairedPopulations& pops, const Level& level) {
  return static_cast<std::uint64_t>(count_in(pops.predators, level.predators)) *
         static_cast<std::uint64_t>(count_in(pops.prey, level.prey));
}

std::size_t current_level(const PairedPopulations& pops, const LevelSequence& seq, double gamma0) {
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) {
    throw std::invalid_argument(fmt::format("current_level: gamma0={} outside (0,1)", gamma0));
  }
  const auto lambda = static_cast<double>(pops.lambda());
  const double threshold = gamma0 * lambda * lambda;
  for (std::size_t j = seq.m(); j >= 1; --j) {
    if (static_cast<double>(pairs_in_level(pops, seq.level(j))) >= threshold) return j;
  }
  return 1;
}

FractionStats fraction_stats(const PairedPopulations& pops, std::int64_t k, std::int64_t l,
                             const BilinearParams& p) {
  FractionStats s{};
  s.lambda = pops.lambda();
  for (const auto& x : pops.predators) {
    switch (classify_predator(x, k, p).tag) {
      case RegionTag::R0: ++s.r0; break;
      case RegionTag::R1: ++s.r1; break;
      default: ++s.r2; break;
    }
  }
  for (const auto& y : pops.prey) {
    switch (classify_prey(y, l, p).tag) {
      case RegionTag::S0: ++s.s0; break;
      case RegionTag::S1: ++s.s1; break;
      default: ++s.s2; break;
    }
  }
  return s;
}

ExactProbability exact_selection_distribution(const PairedPopulations& pops,
                                              const DominanceOracle& dom, const PairPredicate& in_c,
                                              std::size_t cap) {
  const std::size_t lambda = pops.lambda();
  if (lambda > cap) {
    throw EnumerationTooLarge(
        fmt::format("exact enumeration needs lambda <= {}, got {}", cap, lambda));
  }
  const auto& P = pops.predators;
  const auto& Q = pops.prey;
  ExactProbability out;
  for (std::size_t x1 = 0; x1 < lambda; ++x1) {
    for (std::size_t y1 = 0; y1 < lambda; ++y1) {
      for (std::size_t x2 = 0; x2 < lambda; ++x2) {
        for (std::size_t y2 = 0; y2 < lambda; ++y2) {
          const bool first = dom(P[x1], Q[y1], P[x2], Q[y2]);
          const bool hit = first ? in_c(P[x1], Q[y1]) : in_c(P[x2], Q[y2]);
          if (hit) ++out.hits;
          ++out.total;
        }
      }
    }
  }
  return out;
}

std::array<ExactProbability, 4> half_probability_conditionals(const PairedPopulations& pops,
                                                              const BilinearParams& p,
                                                              std::size_t cap) {
  const std::size_t lambda = pops.lambda();
  if (lambda > cap) {
    throw EnumerationTooLarge(
        fmt::format("exact enumeration needs lambda <= {}, got {}", cap, lambda));
  }
  std::vector<std::int64_t> cx(lambda);
  std::vector<std::int64_t> cy(lambda);
  for (std::size_t i = 0; i < lambda; ++i) {
    cx[i] = static_cast<std::int64_t>(ones(pops.predators[i]));
    cy[i] = static_cast<std::int64_t>(ones(pops.prey[i]));
  }
  const double bn = p.beta_n();
  const double an = p.alpha_n();
  std::array<ExactProbability, 4> out{};
  for (std::int64_t x1 : cx) {
    for (std::int64_t y1 : cy) {
      for (std::int64_t x2 : cx) {
        for (std::int64_t y2 : cy) {
          const auto fx1 = static_cast<double>(x1);
          const auto fx2 = static_cast<double>(x2);
          const auto fy1 = static_cast<double>(y1);
          const auto fy2 = static_cast<double>(y2);
          const std::array<bool, 4> cond{
              y1 <= y2 && fx1 > bn && fx2 > bn,
              y1 >= y2 && fx1 < bn && fx2 < bn,
              x1 >= x2 && fy1 > an && fy2 > an,
              x1 <= x2 && fy1 < an && fy2 < an,
          };
          const bool d = dominates_by_onecounts(x1, y1, x2, y2, p);
          for (std::size_t c = 0; c < 4; ++c) {
            if (!cond[c]) continue;
            ++out[c].total;
            if (d) ++out[c].hits;
          }
        }
      }
    }
  }
  return out;
}

LevelFunctionCheck check_level_function(const LevelFunction& g, std::size_t lambda,
                                        std::size_t m) {
  const auto top = static_cast<std::int64_t>(lambda * lambda);
  for (std::size_t j = 1; j <= m; ++j) {
    for (std::int64_t k = 0; k < top; ++k) {
      if (!(g(k, j) >= g(k + 1, j))) {
        return {false, fmt::format("g({}, {}) < g({}, {})", k, j, k + 1, j)};
      }
    }
  }
  for (std::size_t j = 1; j < m; ++j) {
    for (std::int64_t k = 0; k <= top; ++k) {
      if (!(g(k, j) >= g(k, j + 1))) {
        return {false, fmt::format("g({}, {}) < g({}, {})", k, j, k, j + 1)};
      }
    }
    if (!(g(top, j) >= g(0, j + 1))) {
      return {false, fmt::format("g({}, {}) < g(0, {})", top, j, j + 1)};
    }
  }
  return {true, {}};
}

bool validate_level_function(const LevelFunction& g, std::size_t lambda, std::size_t m) {
  return check_level_function(g, lambda, m).ok;
}

double LevelFunctionParams::q(std::size_t j) const {
  const double lz = static_cast<double>(lambda) * z.at(j - 1);
  return lz / (4.0 + lz);
}

void LevelFunctionParams::validate() const {
  if (lambda == 0 || m == 0) throw std::invalid_argument("level function: lambda, m must be >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("level function: eta must be positive");
  if (!(phi > 0.0 && phi < 1.0)) throw std::invalid_argument("level function: phi outside (0,1)");
  if (z.size() != m - 1) {
    throw std::invalid_argument(
        fmt::format("level function: expected {} z values, got {}", m - 1, z.size()));
  }
  for (double zi : z) {
    if (!(zi > 0.0 && zi <= 1.0)) {
      throw std::invalid_argument(fmt::format("level function: z={} outside (0,1]", zi));
    }
  }
}

double reference_eta(double delta, std::size_t lambda) {
  return (1.0 - 1.0 / std::sqrt(1.0 + delta)) / static_cast<double>(lambda);
}

ReferenceLevelFunctions reference_g1_g2(const LevelFunctionParams& params) {
  params.validate();
  const std::size_t m = params.m;
  const double lambda2 = static_cast<double>(params.lambda * params.lambda);
  const double scale = params.eta / (1.0 + params.eta);

  // tail[j] = sum_{i=j}^{m-1} 1/q_i for j = 1..m; tail[m] is the empty sum.
  std::vector<double> tail(m + 2, 0.0);
  std::vector<double> q(m + 1, 0.0);
  for (std::size_t j = 1; j < m; ++j) q[j] = params.q(j);
  for (std::size_t j = m - 1; j >= 1; --j) tail[j] = 1.0 / q[j] + tail[j + 1];

  ReferenceLevelFunctions f;
  f.g1 = [scale, m, lambda2](std::int64_t k, std::size_t j) {
    return scale * (static_cast<double>(m - j) * lambda2 - static_cast<double>(k));
  };
  f.g2 = [phi = params.phi, eta = params.eta, m, q, tail](std::int64_t k, std::size_t j) {
    if (j >= m) return 0.0;
    return phi * (std::exp(-eta * static_cast<double>(k)) / q[j] + tail[j + 1]);
  };
  f.sum = [g1 = f.g1, g2 = f.g2](std::int64_t k, std::size_t j) { return g1(k, j) + g2(k, j); };
  return f;
}

double level_function_origin_bound(const LevelFunctionParams& params) {
  params.validate();
  double z_star = 1.0;
  for (double zi : params.z) z_star = std::min(z_star, zi);
  const auto lambda = static_cast<double>(params.lambda);
  return 3.0 * params.eta * lambda * lambda * static_cast<double>(params.m) / z_star;
}

}  // namespace coevo
