#include "coevo/population_lemmas.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace coevo {

namespace {

struct Moments {
  double sum = 0;
  double sum_sq = 0;
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++count;
  }
  double mean() const { return sum / static_cast<double>(count); }
  double standard_error() const {
    const auto c = static_cast<double>(count);
    const double var = std::max(0.0, sum_sq / c - mean() * mean());
    return std::sqrt(var / c);
  }
};

PairedPopulations unit_populations(std::size_t lambda) {
  std::vector<BitVector> members(lambda, BitVector(1));
  return PairedPopulations(Population(members), Population(members));
}

// Members of A and B after one generation.
std::pair<std::size_t, std::size_t> sample_counts(const PairedPopulations& start,
                                                  const InteractionDistribution& d,
                                                  RandomStream& rng, PairedPopulations& next) {
  step_generation_into(start, d, rng, next);
  std::size_t a = 0;
  std::size_t b = 0;
  for (const auto& x : next.predators) a += x.test(0) ? 1 : 0;
  for (const auto& y : next.prey) b += y.test(0) ? 1 : 0;
  return {a, b};
}

void require_setup(const PopulationLemmaSetup& s) {
  if (s.lambda < 2) throw std::invalid_argument("population lemma: lambda must be >= 2");
  if (!(s.pa >= 0 && s.pa <= 1 && s.pb >= 0 && s.pb <= 1)) {
    throw std::invalid_argument("population lemma: probabilities outside [0,1]");
  }
  if (s.samples == 0) throw std::invalid_argument("population lemma: samples must be positive");
}

}  // namespace

EngineeredInteraction::EngineeredInteraction(double pa, double pb, Coupling coupling)
    : pa_(pa), pb_(pb), coupling_(coupling) {}

void EngineeredInteraction::sample_into(const PairedPopulations&, RandomStream& rng, BitVector& x,
                                        BitVector& y) const {
  const double u = rng.uniform01();
  double v = u;
  switch (coupling_) {
    case Coupling::Independent: v = rng.uniform01(); break;
    case Coupling::Comonotone: break;
    case Coupling::Anti: v = 1.0 - u; break;
  }
  x.set(0, u < pa_);
  y.set(0, v < pb_);
}

ProductCountReport check_product_count_lemma(const PopulationLemmaSetup& s) {
  require_setup(s);
  if (!(s.delta > 0 && s.gamma > 0 && s.gamma < 1 && s.delta1 > 0 && s.delta1 < s.delta)) {
    throw std::invalid_argument("population lemma: need delta > delta1 > 0, gamma in (0,1)");
  }
  const auto lambda = static_cast<double>(s.lambda);
  const double eta = (1.0 - 1.0 / std::sqrt(1.0 + s.delta)) / lambda;
  const double floor_z = lambda * (s.gamma * lambda - 1.0);

  const EngineeredInteraction d(s.pa, s.pb, s.coupling);
  RandomStream rng(s.seed);
  const PairedPopulations start = unit_populations(s.lambda);
  PairedPopulations next = start;
  Moments z_m;
  Moments mgf_m;
  std::size_t below_floor = 0;
  for (std::size_t i = 0; i < s.samples; ++i) {
    const auto [a, b] = sample_counts(start, d, rng, next);
    const auto z = static_cast<double>(a * b);
    z_m.add(z);
    mgf_m.add(std::exp(-eta * z));
    if (z < floor_z) ++below_floor;
  }

  ProductCountReport r{};
  r.premise = s.pa * s.pb >= (1.0 + s.delta) * s.gamma;
  r.mean_z = z_m.mean();
  r.mean_z_se = z_m.standard_error();
  r.mean_bound = lambda * (lambda - 1.0) * (1.0 + s.delta) * s.gamma;
  r.mgf = mgf_m.mean();
  r.mgf_se = mgf_m.standard_error();
  r.mgf_bound = std::exp(-eta * floor_z);
  r.tail = static_cast<double>(below_floor) / static_cast<double>(s.samples);
  r.tail_bound = std::exp(-s.delta1 * s.gamma * lambda *
                          (1.0 - std::sqrt((1.0 + s.delta1) / (1.0 + s.delta))));
  const double tail_se =
      std::sqrt(r.tail_bound * (1.0 - r.tail_bound) / static_cast<double>(s.samples));
  r.mean_ok = r.mean_z + 6.0 * r.mean_z_se >= r.mean_bound;
  r.mgf_ok = r.mgf - 6.0 * r.mgf_se <= r.mgf_bound;
  r.tail_ok = r.tail <= r.tail_bound + 6.0 * tail_se;
  return r;
}

UpgradeReport check_upgrade_lemma(const PopulationLemmaSetup& s) {
  require_setup(s);
  const double z = s.pa * s.pb;
  if (!(z > 0)) throw std::invalid_argument("population lemma: z must be positive");
  const EngineeredInteraction d(s.pa, s.pb, s.coupling);
  RandomStream rng(s.seed);
  const PairedPopulations start = unit_populations(s.lambda);
  PairedPopulations next = start;
  std::size_t met = 0;
  for (std::size_t i = 0; i < s.samples; ++i) {
    const auto [a, b] = sample_counts(start, d, rng, next);
    if (a > 0 && b > 0) ++met;
  }
  UpgradeReport r{};
  const auto samples = static_cast<double>(s.samples);
  r.r = static_cast<double>(met) / samples;
  r.r_se = std::sqrt(r.r * (1.0 - r.r) / samples);
  r.inverse_bound = 3.0 / (z * (static_cast<double>(s.lambda) - 1.0)) + 1.0;
  // 1/r < bound  <=>  r > 1/bound; allow six standard errors on r.
  r.pass = r.r + 6.0 * r.r_se + 1.0 / samples > 1.0 / r.inverse_bound;
  return r;
}

}  // namespace coevo
