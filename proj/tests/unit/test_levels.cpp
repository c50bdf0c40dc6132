#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "coevo/bilinear.hpp"
#include "coevo/levels.hpp"
#include "coevo/population.hpp"
#include "coevo/population_lemmas.hpp"
#include "coevo/random.hpp"

using namespace coevo;

namespace {

// Dominance straight from the payoff definition on one-counts.
bool ref_dom(double x1, double y1, double x2, double y2, const BilinearParams& p) {
  const auto g = [&](double x, double y) { return y * (x - p.beta_n()) - p.alpha_n() * x; };
  return g(x1, y2) >= g(x1, y1) && g(x1, y1) >= g(x2, y1);
}

PairedPopulations from_counts(const std::vector<std::size_t>& xs, const std::vector<std::size_t>& ys,
                              std::size_t n) {
  return PairedPopulations(population_from_counts(xs, n), population_from_counts(ys, n));
}

PairedPopulations random_counts(std::size_t lambda, std::size_t n, RandomStream& rng) {
  std::vector<std::size_t> xs, ys;
  for (std::size_t i = 0; i < lambda; ++i) {
    xs.push_back(rng.uniform_below(n + 1));
    ys.push_back(rng.uniform_below(n + 1));
  }
  return from_counts(xs, ys, n);
}

// Probability that selection lands in C, by walking all lambda^4 draws with
// the definition-level dominance test.
double ref_selection(const PairedPopulations& pops, const BilinearParams& p,
                     const std::function<bool(std::size_t, std::size_t)>& in_c) {
  const auto lambda = pops.lambda();
  const auto xs = pops.predators.one_counts();
  const auto ys = pops.prey.one_counts();
  std::uint64_t hits = 0, total = 0;
  for (std::size_t a = 0; a < lambda; ++a)
    for (std::size_t b = 0; b < lambda; ++b)
      for (std::size_t c = 0; c < lambda; ++c)
        for (std::size_t d = 0; d < lambda; ++d) {
          const bool first = ref_dom(double(xs[a]), double(ys[b]), double(xs[c]), double(ys[d]), p);
          const auto [x, y] = first ? std::pair{xs[a], ys[b]} : std::pair{xs[c], ys[d]};
          hits += in_c(x, y) ? 1 : 0;
          ++total;
        }
  return double(hits) / double(total);
}

}  // namespace

TEST_CASE("level sequence runs from the full space to the target") {
  const auto p = BilinearParams::make(20, 0.9, 0.05, 0.1);  // beta n = 1, target [16, 18)
  const auto seq = build_bilinear_levels(p);
  CHECK(seq.m() == 1 + 19 + 17);
  const auto& first = seq.level(1);
  CHECK(first.predators == CountInterval{0, 20});
  CHECK(first.prey == CountInterval{0, 20});
  for (std::int64_t j = 1; j <= 19; ++j) {
    const auto& l = seq.level(static_cast<std::size_t>(1 + j));
    CHECK(l.phase == 1);
    CHECK(l.predators == CountInterval{0, 20 - j - 1});
    CHECK(l.prey == CountInterval{0, 15});
  }
  const auto& last = seq.level(seq.m());
  CHECK(last.phase == 2);
  for (std::int64_t x = 0; x <= 20; ++x) {
    for (std::int64_t y = 0; y <= 20; ++y) {
      CHECK(last.contains(x, y) == (in_r0(x, p) && in_target_band(y, p)));
    }
  }
  CHECK_THROWS_AS(build_bilinear_levels(BilinearParams::make(10, 0.1, 0.5, 0.5)),
                  std::invalid_argument);
}

TEST_CASE("the last level is the target for fractional thresholds") {
  const auto p = BilinearParams::make(30, 0.9, 0.05, 0.1);  // beta n = 1.5
  const auto seq = build_bilinear_levels(p);
  const auto& last = seq.level(seq.m());
  for (std::int64_t x = 0; x <= 30; ++x) {
    for (std::int64_t y = 0; y <= 30; ++y) {
      CHECK(last.contains(x, y) == (in_r0(x, p) && in_target_band(y, p)));
    }
  }
}

TEST_CASE("pairs in a level and the current level match brute force") {
  RandomStream rng(1);
  const auto p = BilinearParams::make(10, 0.8, 0.2, 0.3);
  const auto seq = build_bilinear_levels(p);
  for (int rep = 0; rep < 200; ++rep) {
    const auto pops = random_counts(6, 10, rng);
    std::size_t expected_level = 1;
    for (std::size_t j = 1; j <= seq.m(); ++j) {
      std::uint64_t pairs = 0;
      for (const auto& x : pops.predators)
        for (const auto& y : pops.prey)
          pairs += seq.level(j).contains(std::int64_t(ones(x)), std::int64_t(ones(y))) ? 1 : 0;
      CHECK(pairs_in_level(pops, seq.level(j)) == pairs);
      if (double(pairs) >= kGamma0 * 36.0) expected_level = j;
    }
    CHECK(current_level(pops, seq, kGamma0) == expected_level);
  }
  CHECK_THROWS_AS(current_level(random_counts(2, 10, rng), seq, 1.0), std::invalid_argument);
}

TEST_CASE("fraction statistics partition each population") {
  RandomStream rng(2);
  const auto p = BilinearParams::make(10, 0.6, 0.3, 0.2);
  for (int rep = 0; rep < 100; ++rep) {
    const auto pops = random_counts(7, 10, rng);
    const auto f = fraction_stats(pops, 2, 3, p);
    CHECK(f.r0 + f.r1 + f.r2 == 7);
    CHECK(f.s0 + f.s1 + f.s2 == 7);
    std::size_t r0 = 0, s1 = 0;
    for (const auto& x : pops.predators) r0 += ones(x) < 3 ? 1 : 0;
    for (const auto& y : pops.prey) s1 += (ones(y) >= 3 && ones(y) < 6) ? 1 : 0;
    CHECK(f.r0 == r0);
    CHECK(f.s1 == s1);
    CHECK(f.p0() == double(r0) / 7.0);
  }
}

TEST_CASE("exact selection distribution matches definition-level enumeration") {
  RandomStream rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 4 + rng.uniform_below(7);
    const std::size_t lambda = 2 + rng.uniform_below(4);
    const auto p = BilinearParams::make(n, double(rng.uniform_below(n + 1)) / double(n),
                                        double(rng.uniform_below(n + 1)) / double(n), 1.0);
    const auto pops = random_counts(lambda, n, rng);
    const std::size_t cut = rng.uniform_below(n + 1);
    const auto exact = exact_selection_distribution(
        pops, bilinear_dominance(p),
        [&](const BitVector& x, const BitVector& y) { return ones(x) <= cut && ones(y) >= cut; });
    CHECK(exact.total == lambda * lambda * lambda * lambda);
    CHECK(exact.value() ==
          ref_selection(pops, p, [&](std::size_t x, std::size_t y) { return x <= cut && y >= cut; }));
  }
}

TEST_CASE("enumeration refuses large populations") {
  RandomStream rng(4);
  const auto pops = random_counts(13, 5, rng);
  const auto p = BilinearParams::make(5, 0.5, 0.5, 1.0);
  CHECK_THROWS_AS(exact_selection_distribution(pops, bilinear_dominance(p),
                                               [](const BitVector&, const BitVector&) { return true; }),
                  EnumerationTooLarge);
}

TEST_CASE("half-probability conditionals match direct enumeration") {
  RandomStream rng(5);
  const auto p = BilinearParams::make(10, 0.4, 0.6, 1.0);
  for (int rep = 0; rep < 40; ++rep) {
    const auto pops = random_counts(5, 10, rng);
    const auto got = half_probability_conditionals(pops, p);
    const auto xs = pops.predators.one_counts();
    const auto ys = pops.prey.one_counts();
    std::array<std::uint64_t, 4> hits{}, totals{};
    const double an = p.alpha_n(), bn = p.beta_n();
    for (auto x1 : xs)
      for (auto y1 : ys)
        for (auto x2 : xs)
          for (auto y2 : ys) {
            const double a = double(x1), b = double(y1), c = double(x2), d = double(y2);
            const std::array<bool, 4> cond{b <= d && a > bn && c > bn, b >= d && a < bn && c < bn,
                                           a >= c && b > an && d > an, a <= c && b < an && d < an};
            const bool dom = ref_dom(a, b, c, d, p);
            for (int i = 0; i < 4; ++i) {
              if (!cond[i]) continue;
              ++totals[i];
              hits[i] += dom ? 1 : 0;
            }
          }
    for (int i = 0; i < 4; ++i) {
      CHECK(got[i].hits == hits[i]);
      CHECK(got[i].total == totals[i]);
      if (totals[i] > 0) CHECK(2 * hits[i] >= totals[i]);
    }
  }
}

TEST_CASE("growth checks report unmet hypotheses as failures") {
  const auto p = BilinearParams::make(10, 0.9, 0.3, 0.2);
  const auto pops = from_counts({5, 6, 7}, {1, 2, 3}, 10);  // p0 = 0
  const auto r = check_growth_lemma({17}, pops, p);
  CHECK_FALSE(r.hypotheses_met);
  CHECK_FALSE(r.pass);
  CHECK_THROWS_AS(check_growth_lemma({14}, pops, p), std::invalid_argument);
}

TEST_CASE("predator inequality fails when some prey already lie in S0") {
  const auto p = BilinearParams::make(10, 0.9, 0.3, 0.2);
  const auto a = check_growth_lemma({17}, from_counts({0, 3}, {5, 10}, 10), p);
  CHECK(a.hypotheses_met);
  CHECK(a.ratio == 0.875);
  CHECK(a.bound == 0.9375);
  CHECK_FALSE(a.pass);
  const auto b = check_growth_lemma({17}, from_counts({0, 3, 6, 9}, {6, 7, 10, 10}, 10), p);
  CHECK(b.hypotheses_met);
  CHECK(b.ratio == 0.890625);
  CHECK(b.bound == doctest::Approx(0.90625));
  CHECK_FALSE(b.pass);
}

TEST_CASE("R0 u R1 growth fails inside its hypothesis when q0 > 0") {
  const auto p = BilinearParams::make(10, 0.9, 0.3, 0.2);
  GrowthCase c{19};
  c.k = 7;
  c.rho = 0.1;
  const auto r = check_growth_lemma(c, from_counts({1, 2, 2, 3, 4, 8}, {3, 5, 7, 8, 10, 10}, 10), p);
  CHECK(r.hypotheses_met);
  CHECK(r.ratio == doctest::Approx(1.0463).epsilon(1e-4));
  CHECK(r.bound == doctest::Approx(1.05));
  CHECK_FALSE(r.pass);
}

TEST_CASE("growth inequalities hold on populations without prey in S0") {
  RandomStream rng(6);
  const auto p = BilinearParams::make(10, 0.9, 0.05, 0.1);
  int checked = 0;
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<std::size_t> xs, ys;
    for (int i = 0; i < 6; ++i) {
      xs.push_back(rng.uniform_below(11));
      ys.push_back(rng.uniform_below(9));  // below alpha n = 9
    }
    const auto pops = from_counts(xs, ys, 10);
    for (int lemma : {17, 18, 19}) {
      GrowthCase c{lemma};
      c.k = static_cast<std::int64_t>(rng.uniform_below(10));
      c.l = 1 + static_cast<std::int64_t>(rng.uniform_below(8));
      const auto r = check_growth_lemma(c, pops, p);
      if (!r.hypotheses_met) continue;
      ++checked;
      CHECK(r.pass);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("level function validator") {
  const LevelFunction constant = [](std::int64_t, std::size_t) { return 1.0; };
  CHECK(validate_level_function(constant, 4, 3));
  const LevelFunction up_in_k = [](std::int64_t k, std::size_t) { return double(k); };
  CHECK_FALSE(validate_level_function(up_in_k, 4, 3));
  const LevelFunction up_in_j = [](std::int64_t, std::size_t j) { return double(j); };
  CHECK_FALSE(validate_level_function(up_in_j, 4, 3));
  // Monotone in k and j but dropping too little across a level boundary.
  const LevelFunction gap = [](std::int64_t k, std::size_t j) { return -double(k) - 0.5 * double(j); };
  const auto chk = check_level_function(gap, 2, 3);
  CHECK_FALSE(chk.ok);
  CHECK_FALSE(chk.violation.empty());
}

TEST_CASE("reference eta lies strictly inside its bracket") {
  for (double delta : {1e-4, 0.01, 0.3, 0.9}) {
    for (std::size_t lambda : {1, 10, 1000}) {
      const double eta = reference_eta(delta, lambda);
      CHECK(eta > 3 * delta / (11 * double(lambda)));
      CHECK(eta < delta / (2 * double(lambda)));
    }
  }
}

TEST_CASE("reference g1 and g2 follow their closed forms") {
  LevelFunctionParams lp{0.01, 0.7, {0.2, 0.5, 1.0}, 6, 4};
  const auto g = reference_g1_g2(lp);
  const auto q = [&](double z) { return 6 * z / (4 + 6 * z); };
  for (std::int64_t k : {0, 5, 36}) {
    for (std::size_t j = 1; j <= 4; ++j) {
      const double g1 = 0.01 / 1.01 * (double(4 - j) * 36.0 - double(k));
      double g2 = 0.0;
      if (j < 4) {
        g2 = std::exp(-0.01 * double(k)) / q(lp.z[j - 1]);
        for (std::size_t i = j + 1; i < 4; ++i) g2 += 1.0 / q(lp.z[i - 1]);
        g2 *= 0.7;
      }
      CHECK(g.g1(k, j) == doctest::Approx(g1).epsilon(1e-12));
      CHECK(g.g2(k, j) == doctest::Approx(g2).epsilon(1e-12));
      CHECK(g.sum(k, j) == doctest::Approx(g1 + g2).epsilon(1e-12));
    }
  }
  CHECK(lp.q(2) == doctest::Approx(q(0.5)));
  CHECK(validate_level_function(g.sum, 6, 4));
  CHECK(g.sum(0, 1) <= level_function_origin_bound(lp));
}

TEST_CASE("level function parameters are validated") {
  CHECK_THROWS_AS(reference_g1_g2({0.0, 0.5, {0.5}, 4, 2}), std::invalid_argument);
  CHECK_THROWS_AS(reference_g1_g2({0.1, 1.0, {0.5}, 4, 2}), std::invalid_argument);
  CHECK_THROWS_AS(reference_g1_g2({0.1, 0.5, {0.5, 0.5}, 4, 2}), std::invalid_argument);
  CHECK_THROWS_AS(reference_g1_g2({0.1, 0.5, {1.5}, 4, 2}), std::invalid_argument);
}

TEST_CASE("engineered interactions have the requested marginals") {
  PairedPopulations pops(population_from_counts({0}, 1), population_from_counts({0}, 1));
  for (auto coupling : {Coupling::Independent, Coupling::Comonotone, Coupling::Anti}) {
    const EngineeredInteraction d(0.3, 0.6, coupling);
    RandomStream rng(7);
    int a = 0, b = 0, both = 0;
    constexpr int reps = 100000;
    for (int i = 0; i < reps; ++i) {
      const auto [x, y] = d.sample(pops, rng);
      a += x.test(0);
      b += y.test(0);
      both += x.test(0) && y.test(0);
    }
    CHECK(std::abs(a / double(reps) - 0.3) < 0.01);
    CHECK(std::abs(b / double(reps) - 0.6) < 0.01);
    const double joint = both / double(reps);
    if (coupling == Coupling::Independent) CHECK(std::abs(joint - 0.18) < 0.01);
    if (coupling == Coupling::Comonotone) CHECK(std::abs(joint - 0.3) < 0.01);
    if (coupling == Coupling::Anti) CHECK(joint < 0.01);
  }
}

TEST_CASE("product-count and upgrade checks pass under their premise") {
  PopulationLemmaSetup s;
  s.samples = 5000;
  CHECK(check_product_count_lemma(s).pass());
  CHECK(check_upgrade_lemma(s).pass);
  s.pa = 0.5;
  s.pb = 0.5;
  CHECK_FALSE(check_product_count_lemma(s).premise);
}
