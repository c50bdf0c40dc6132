#include "coevo/checks.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "coevo/bilinear.hpp"
#include "coevo/levels.hpp"
#include "coevo/pdcoea.hpp"
#include "coevo/population_lemmas.hpp"
#include "coevo/random.hpp"
#include "coevo/theory.hpp"

namespace coevo {

namespace {

struct Game {
  double alpha;
  double beta;
};

constexpr std::array<Game, 3> kGames{{{0.4, 0.6}, {0.9, 0.05}, {0.0, 1.0}}};

BilinearParams game_for(std::size_t n, double alpha, double beta) {
  return BilinearParams::make(n, alpha, beta, 1.0);
}

BitVector random_with_ones(std::size_t n, std::size_t count, RandomStream& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::shuffle(idx.begin(), idx.end(), rng);
  BitVector v(n);
  for (std::size_t i = 0; i < count; ++i) v.set(idx[i], true);
  return v;
}

std::int64_t ceil_count(double v) { return static_cast<std::int64_t>(std::ceil(v)); }

std::string_view growth_name(int id) {
  switch (id) {
    case 15: return "R0 x S1 growth, mid p0";
    case 16: return "R0 x S1 growth, p0 near 1";
    case 17: return "R0 growth";
    case 18: return "S1 growth";
    case 19: return "R0 u R1 growth";
  }
  return "growth";
}

std::size_t uniform_in(RandomStream& rng, std::int64_t lo, std::int64_t hi) {
  return static_cast<std::size_t>(lo) +
         static_cast<std::size_t>(rng.uniform_below(static_cast<std::uint64_t>(hi - lo + 1)));
}

// Population with `inside` members drawn uniformly from [in_lo, in_hi] and
// the rest from [out_lo, out_hi].
Population split_population(std::size_t lambda, std::size_t n, std::size_t inside,
                            std::int64_t in_lo, std::int64_t in_hi, std::int64_t out_lo,
                            std::int64_t out_hi, RandomStream& rng) {
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < lambda; ++i) {
    counts.push_back(i < inside ? uniform_in(rng, in_lo, in_hi) : uniform_in(rng, out_lo, out_hi));
  }
  std::shuffle(counts.begin(), counts.end(), rng);
  return population_from_counts(counts, n);
}

}  // namespace

bool CheckReport::passed() const noexcept {
  return !lines.empty() &&
         std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

CheckLine check_onecount_equivalence(std::size_t n, double alpha, double beta, std::uint64_t seed) {
  const auto p = game_for(n, alpha, beta);
  RandomStream rng(seed);
  const auto c = static_cast<std::int64_t>(n);
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  for (std::int64_t x1 = 0; x1 <= c; ++x1) {
    const auto bx1 = random_with_ones(n, static_cast<std::size_t>(x1), rng);
    for (std::int64_t y1 = 0; y1 <= c; ++y1) {
      const auto by1 = random_with_ones(n, static_cast<std::size_t>(y1), rng);
      for (std::int64_t x2 = 0; x2 <= c; ++x2) {
        const auto bx2 = random_with_ones(n, static_cast<std::size_t>(x2), rng);
        for (std::int64_t y2 = 0; y2 <= c; ++y2) {
          const auto by2 = random_with_ones(n, static_cast<std::size_t>(y2), rng);
          ++checked;
          if (dominates(bx1, by1, bx2, by2, p) != dominates_by_onecounts(x1, y1, x2, y2, p)) {
            ++mismatches;
          }
        }
      }
    }
  }
  return {fmt::format("one-count dominance n={} alpha={} beta={}", n, alpha, beta), mismatches == 0,
          fmt::format("{}^4 quadruples verified ({}), {} mismatches", n + 1, checked, mismatches)};
}

CheckLine check_reflexivity(std::size_t n, double alpha, double beta) {
  const auto p = game_for(n, alpha, beta);
  const auto c = static_cast<std::int64_t>(n);
  std::uint64_t failures = 0;
  for (std::int64_t x = 0; x <= c; ++x) {
    for (std::int64_t y = 0; y <= c; ++y) {
      const auto bx = population_from_counts({static_cast<std::size_t>(x)}, n)[0];
      const auto by = population_from_counts({static_cast<std::size_t>(y)}, n)[0];
      if (!dominates(bx, by, bx, by, p) || !dominates_by_onecounts(x, y, x, y, p)) ++failures;
    }
  }
  return {fmt::format("reflexivity n={} alpha={} beta={}", n, alpha, beta), failures == 0,
          fmt::format("{} pairs, {} failures", (n + 1) * (n + 1), failures)};
}

CheckLine check_intransitivity(std::size_t n, double alpha, double beta) {
  const auto p = game_for(n, alpha, beta);
  const auto cycle = intransitivity_witness(p);
  CheckLine line{fmt::format("intransitivity n={} alpha={} beta={}", n, alpha, beta), false,
                 "no witness found"};
  if (cycle) {
    line.pass = is_intransitive_cycle(*cycle, p);
    line.detail = fmt::format("cycle ({},{}) -> ({},{}) -> ({},{}) -> ({},{}) {}", (*cycle)[0].x,
                              (*cycle)[0].y, (*cycle)[1].x, (*cycle)[1].y, (*cycle)[2].x,
                              (*cycle)[2].y, (*cycle)[3].x, (*cycle)[3].y,
                              line.pass ? "verified" : "REJECTED");
  }
  return line;
}

CheckLine check_conditional_halves(std::size_t populations, std::size_t lambda, std::size_t n,
                                   std::uint64_t seed) {
  RandomStream rng(seed);
  std::uint64_t evaluated = 0;
  std::uint64_t null_events = 0;
  std::uint64_t violations = 0;
  std::string first;
  for (std::size_t i = 0; i < populations; ++i) {
    const Game g = kGames[i % kGames.size()];
    const auto p = game_for(n, g.alpha, g.beta);
    PairedPopulations pops(split_population(lambda, n, 0, 0, 0, 0, static_cast<std::int64_t>(n), rng),
                           split_population(lambda, n, 0, 0, 0, 0, static_cast<std::int64_t>(n), rng));
    const auto probs = half_probability_conditionals(pops, p);
    for (std::size_t c = 0; c < probs.size(); ++c) {
      if (probs[c].total == 0) {
        ++null_events;
        continue;
      }
      ++evaluated;
      if (2 * probs[c].hits < probs[c].total) {
        ++violations;
        if (first.empty()) {
          first = fmt::format("; first: population {} condition {} gives {}/{}", i, c,
                              probs[c].hits, probs[c].total);
        }
      }
    }
  }
  return {fmt::format("conditional half-probabilities lambda={} n={}", lambda, n), violations == 0,
          fmt::format("{} populations, {} conditionals evaluated, {} null, {} below 1/2{}",
                      populations, evaluated, null_events, violations, first)};
}

CheckLine check_selection_oracle(std::size_t populations, std::size_t draws, std::uint64_t seed) {
  RandomStream rng(seed);
  std::uint64_t comparisons = 0;
  std::uint64_t failures = 0;
  double worst_z = 0.0;
  for (std::size_t i = 0; i < populations; ++i) {
    const std::size_t lambda = 2 + rng.uniform_below(5);
    const std::size_t n = 4 + rng.uniform_below(7);
    const auto alpha = static_cast<double>(rng.uniform_below(n + 1)) / static_cast<double>(n);
    const auto beta = static_cast<double>(rng.uniform_below(n + 1)) / static_cast<double>(n);
    const auto p = game_for(n, alpha, beta);
    const auto dom = bilinear_dominance(p);
    const auto nn = static_cast<std::int64_t>(n);
    PairedPopulations pops(split_population(lambda, n, 0, 0, 0, 0, nn, rng),
                           split_population(lambda, n, 0, 0, 0, 0, nn, rng));

    auto xc = pops.predators.one_counts();
    auto yc = pops.prey.one_counts();
    std::sort(xc.begin(), xc.end());
    std::sort(yc.begin(), yc.end());
    const std::size_t x_med = xc[lambda / 2];
    const std::size_t y_med = yc[lambda / 2];
    const std::size_t x0 = ones(pops.predators[0]);
    const std::size_t y0 = ones(pops.prey[0]);
    const std::array<PairPredicate, 3> sets{
        [&](const BitVector& x, const BitVector&) { return ones(x) <= x_med; },
        [&](const BitVector&, const BitVector& y) { return ones(y) >= y_med; },
        [&](const BitVector& x, const BitVector& y) { return ones(x) == x0 && ones(y) == y0; },
    };

    std::array<std::uint64_t, 3> counts{};
    for (std::size_t d = 0; d < draws; ++d) {
      const auto s = select_pair(pops, dom, rng);
      for (std::size_t c = 0; c < sets.size(); ++c) {
        if (sets[c](pops.predators[s.predator], pops.prey[s.prey])) ++counts[c];
      }
    }
    for (std::size_t c = 0; c < sets.size(); ++c) {
      const double exact = exact_selection_distribution(pops, dom, sets[c]).value();
      const double freq = static_cast<double>(counts[c]) / static_cast<double>(draws);
      const double se = std::sqrt(exact * (1.0 - exact) / static_cast<double>(draws));
      ++comparisons;
      if (se == 0.0) {
        if (freq != exact) ++failures;
        continue;
      }
      const double z = std::abs(freq - exact) / se;
      worst_z = std::max(worst_z, z);
      if (z > 6.0) ++failures;
    }
  }
  return {fmt::format("selection distribution, {} draws", draws), failures == 0,
          fmt::format("{} populations, {} comparisons, {} beyond 6 SE, max |z| = {:.3f}",
                      populations, comparisons, failures, worst_z)};
}

std::vector<CheckLine> check_growth_suite(std::size_t cases_per_game, std::uint64_t seed) {
  constexpr std::size_t lambda = 10;
  constexpr std::size_t n = 10;
  constexpr std::size_t attempts = 20000;
  struct Regime {
    double alpha, beta, epsilon;
  };
  constexpr std::array<Regime, 4> regimes{
      {{0.9, 0.05, 0.1}, {0.8, 0.2, 0.1}, {0.6, 0.3, 0.2}, {0.5, 0.5, 0.3}}};
  constexpr std::array<double, 2> delta1s{0.25, 0.5};
  constexpr std::array<double, 3> rhos{0.1, 0.5, 0.9};

  RandomStream rng(seed);
  std::vector<CheckLine> out;
  for (int lemma = 15; lemma <= 19; ++lemma) {
    std::size_t met = 0;
    std::size_t failures = 0;
    double min_margin = INFINITY;
    std::string first;
    for (const auto& reg : regimes) {
      const auto p = BilinearParams::make(n, reg.alpha, reg.beta, reg.epsilon);
      const std::int64_t r0_hi = ceil_count(p.beta_n()) - 1;  // largest count in R0
      const std::int64_t s0_lo = ceil_count(p.alpha_n());     // smallest count in S0
      const auto nn = static_cast<std::int64_t>(n);
      std::size_t found = 0;
      for (std::size_t a = 0; a < attempts && found < cases_per_game; ++a) {
        GrowthCase c{lemma};
        c.k = static_cast<std::int64_t>(uniform_in(rng, 0, nn - (r0_hi + 1)));
        c.l = static_cast<std::int64_t>(uniform_in(rng, 1, s0_lo - 1));
        c.delta1 = delta1s[rng.uniform_below(delta1s.size())];
        c.rho = rhos[rng.uniform_below(rhos.size())];
        const std::size_t in_r0 = r0_hi >= 0 ? uniform_in(rng, 0, lambda) : 0;
        const std::size_t in_s1 = uniform_in(rng, 0, lambda);
        PairedPopulations pops(
            split_population(lambda, n, in_r0, 0, std::max<std::int64_t>(r0_hi, 0), r0_hi + 1, nn,
                             rng),
            split_population(lambda, n, in_s1, c.l, s0_lo - 1, 0, c.l - 1, rng));
        const auto r = check_growth_lemma(c, pops, p);
        if (!r.hypotheses_met) continue;
        ++found;
        min_margin = std::min(min_margin, r.ratio - r.bound);
        if (!r.pass) {
          ++failures;
          if (first.empty()) {
            first = fmt::format("; first: alpha={} beta={} k={} l={} ratio {} vs bound {}",
                                reg.alpha, reg.beta, c.k, c.l, r.ratio, r.bound);
          }
        }
      }
      met += found;
    }
    out.push_back({std::string(growth_name(lemma)), met > 0 && failures == 0,
                   fmt::format("{} hypothesis-satisfying populations, {} violations, min margin "
                               "{:.6g}{}",
                               met, failures, min_margin, first)});
  }
  return out;
}

std::vector<CheckLine> check_level_function_suite() {
  constexpr double delta = 0.5;
  constexpr double phi = 0.5;
  std::size_t grid = 0;
  std::size_t rejected = 0;
  std::string first;
  for (std::size_t lambda : {5, 10, 20}) {
    for (std::size_t m : {2, 5, 10}) {
      for (double z : {0.01, 0.3, 1.0}) {
        LevelFunctionParams lp{reference_eta(delta, lambda), phi,
                               std::vector<double>(m - 1, z), lambda, m};
        // Alternate z across levels to exercise unequal q_j.
        for (std::size_t i = 0; i + 1 < m; i += 2) lp.z[i] = z / 2.0;
        const auto g = reference_g1_g2(lp);
        const auto chk = check_level_function(g.sum, lambda, m);
        ++grid;
        if (!chk.ok) {
          ++rejected;
          if (first.empty()) {
            first = fmt::format("; lambda={} m={} z={}: {}", lambda, m, z, chk.violation);
          }
        }
      }
    }
  }
  std::vector<CheckLine> out;
  out.push_back({"reference level function g1 + g2", rejected == 0,
                 fmt::format("{} (lambda, m, z) settings, {} rejected{}", grid, rejected, first)});
  const LevelFunction increasing = [](std::int64_t k, std::size_t) { return static_cast<double>(k); };
  const auto bad = check_level_function(increasing, 10, 5);
  out.push_back({"g(k, j) = k rejected", !bad.ok,
                 bad.ok ? std::string("accepted") : fmt::format("rejected: {}", bad.violation)});
  return out;
}

std::vector<CheckLine> check_inequality_suite(std::size_t mgf_samples, std::uint64_t seed) {
  std::vector<CheckLine> out;
  for (const auto& c : check_inequality_lemmas(mgf_samples, seed)) {
    out.push_back({c.name, c.pass(),
                   fmt::format("{} points, {} violations{}{}", c.points, c.violations,
                               c.detail.empty() ? "" : "; ", c.detail)});
  }
  return out;
}

std::vector<CheckLine> check_population_suite(std::size_t samples, std::uint64_t seed) {
  std::vector<CheckLine> out;
  const std::array<std::pair<Coupling, std::string_view>, 3> couplings{
      {{Coupling::Independent, "independent"},
       {Coupling::Comonotone, "comonotone"},
       {Coupling::Anti, "anti"}}};
  std::uint64_t s = seed;
  for (const auto& [coupling, label] : couplings) {
    PopulationLemmaSetup setup;
    setup.coupling = coupling;
    setup.samples = samples;
    setup.seed = s++;
    const auto pc = check_product_count_lemma(setup);
    out.push_back({fmt::format("product count ({})", label), pc.pass(),
                   fmt::format("mean {:.4f} (bound {:.4f}), mgf {:.4g} (bound {:.4g}), tail {:.4g} "
                               "(bound {:.4g})",
                               pc.mean_z, pc.mean_bound, pc.mgf, pc.mgf_bound, pc.tail,
                               pc.tail_bound)});
    for (double pab : {0.05, 0.3}) {
      PopulationLemmaSetup us = setup;
      us.pa = pab;
      us.pb = pab;
      us.seed = s++;
      const auto up = check_upgrade_lemma(us);
      out.push_back({fmt::format("upgrade probability ({}, pa=pb={})", label, pab), up.pass,
                     fmt::format("1/r = {:.4f} vs bound {:.4f} (r = {:.4f} +- {:.4f})",
                                 1.0 / up.r, up.inverse_bound, up.r, up.r_se)});
    }
  }
  return out;
}

const std::vector<std::string>& check_suite_names() {
  static const std::vector<std::string> names{
      "dominance", "intransitivity", "conditional", "selection",  "growth",
      "level-function", "inequalities", "population", "all"};
  return names;
}

CheckReport run_check_suite(std::string_view suite, std::uint64_t seed) {
  CheckReport report{std::string(suite), {}};
  auto& lines = report.lines;
  const auto append = [&lines](std::vector<CheckLine> more) {
    lines.insert(lines.end(), more.begin(), more.end());
  };
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "dominance") {
    known = true;
    for (std::size_t n : {5, 10, 17}) {
      for (const auto& g : kGames) {
        lines.push_back(check_onecount_equivalence(n, g.alpha, g.beta, child_seed(seed, n)));
      }
    }
  }
  if (all || suite == "intransitivity") {
    known = true;
    for (const auto& g : kGames) lines.push_back(check_reflexivity(10, g.alpha, g.beta));
    lines.push_back(check_intransitivity(20, 0.4, 0.6));
  }
  if (all || suite == "conditional") {
    known = true;
    lines.push_back(check_conditional_halves(100, 6, 10, child_seed(seed, 101)));
  }
  if (all || suite == "selection") {
    known = true;
    lines.push_back(check_selection_oracle(20, 100000, child_seed(seed, 102)));
  }
  if (all || suite == "growth") {
    known = true;
    append(check_growth_suite(25, child_seed(seed, 103)));
  }
  if (all || suite == "level-function") {
    known = true;
    append(check_level_function_suite());
  }
  if (all || suite == "inequalities") {
    known = true;
    append(check_inequality_suite(1000000, child_seed(seed, 104)));
  }
  if (all || suite == "population") {
    known = true;
    append(check_population_suite(20000, child_seed(seed, 105)));
  }
  if (!known) throw std::invalid_argument(fmt::format("unknown check suite '{}'", suite));
  return report;
}

std::string format_report(const CheckReport& report) {
  std::string out;
  std::size_t failed = 0;
  for (const auto& l : report.lines) {
    if (!l.pass) ++failed;
    out += fmt::format("[{}] {}: {}\n", l.pass ? "PASS" : "FAIL", l.name, l.detail);
  }
  out += fmt::format("suite {}: {} checks, {} failed\n", report.suite, report.lines.size(), failed);
  return out;
}

}  // namespace coevo
