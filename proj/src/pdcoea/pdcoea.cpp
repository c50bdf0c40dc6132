#include "coevo/pdcoea.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

namespace coevo {

DominanceOracle bilinear_dominance(const BilinearParams& p) {
  DominanceOracle oracle([p](const BitVector& x1, const BitVector& y1, const BitVector& x2,
                             const BitVector& y2) { return dominates(x1, y1, x2, y2, p); });
  oracle.game_ = p;
  return oracle;
}

DrawIndices draw_indices(std::size_t lambda, RandomStream& rng) {
  DrawIndices d{};
  d.x1 = static_cast<std::size_t>(rng.uniform_below(lambda));
  d.y1 = static_cast<std::size_t>(rng.uniform_below(lambda));
  d.x2 = static_cast<std::size_t>(rng.uniform_below(lambda));
  d.y2 = static_cast<std::size_t>(rng.uniform_below(lambda));
  return d;
}

Selection resolve_selection(const PairedPopulations& pops, const DominanceOracle& dom,
                            const DrawIndices& d) {
  if (dom(pops.predators[d.x1], pops.prey[d.y1], pops.predators[d.x2], pops.prey[d.y2])) {
    return {d.x1, d.y1};
  }
  return {d.x2, d.y2};
}

Selection select_pair(const PairedPopulations& pops, const DominanceOracle& dom,
                      RandomStream& rng) {
  return resolve_selection(pops, dom, draw_indices(pops.lambda(), rng));
}

void InteractionDistribution::sample_generation(const PairedPopulations& pops, RandomStream& rng,
                                                PairedPopulations& next) const {
  for (std::size_t i = 0; i < next.lambda(); ++i) {
    sample_into(pops, rng, next.predators[i], next.prey[i]);
  }
}

std::pair<BitVector, BitVector> InteractionDistribution::sample(const PairedPopulations& pops,
                                                                RandomStream& rng) const {
  BitVector x(pops.genome_length());
  BitVector y(pops.genome_length());
  sample_into(pops, rng, x, y);
  return {std::move(x), std::move(y)};
}

PdcoeaInteraction::PdcoeaInteraction(DominanceOracle dom, std::size_t n, double chi)
    : dom_(std::move(dom)), mutation_(n, chi) {}

void PdcoeaInteraction::sample_into(const PairedPopulations& pops, RandomStream& rng,
                                    BitVector& x, BitVector& y) const {
  const Selection s = select_pair(pops, dom_, rng);
  x = pops.predators[s.predator];
  y = pops.prey[s.prey];
  mutation_.apply(x, rng);
  mutation_.apply(y, rng);
}

void PdcoeaInteraction::sample_generation(const PairedPopulations& pops, RandomStream& rng,
                                          PairedPopulations& next) const {
  const BilinearParams* game = dom_.bilinear();
  if (game == nullptr) {
    InteractionDistribution::sample_generation(pops, rng, next);
    return;
  }
  // Same draws and tie rule as select_pair, with dominance decided on cached
  // one-counts.
  const std::size_t lambda = pops.lambda();
  std::vector<double> cx(lambda);
  std::vector<double> cy(lambda);
  for (std::size_t i = 0; i < lambda; ++i) {
    cx[i] = static_cast<double>(ones(pops.predators[i]));
    cy[i] = static_cast<double>(ones(pops.prey[i]));
  }
  const double bn = game->beta_n();
  const double an = game->alpha_n();
  for (std::size_t i = 0; i < lambda; ++i) {
    const DrawIndices d = draw_indices(lambda, rng);
    const double dx = cx[d.x1] - bn;
    const double dy = cy[d.y1] - an;
    const bool first = cy[d.y2] * dx >= cy[d.y1] * dx && cx[d.x1] * dy >= cx[d.x2] * dy;
    const std::size_t xi = first ? d.x1 : d.x2;
    const std::size_t yi = first ? d.y1 : d.y2;
    next.predators[i] = pops.predators[xi];
    next.prey[i] = pops.prey[yi];
    mutation_.apply(next.predators[i], rng);
    mutation_.apply(next.prey[i], rng);
  }
}

std::pair<BitVector, BitVector> pdcoea_interaction(const PairedPopulations& pops,
                                                   const DominanceOracle& dom, double chi,
                                                   RandomStream& rng) {
  return PdcoeaInteraction(dom, pops.genome_length(), chi).sample(pops, rng);
}

void step_generation_into(const PairedPopulations& pops, const InteractionDistribution& d,
                          RandomStream& rng, PairedPopulations& next) {
  if (next.lambda() != pops.lambda() || next.genome_length() != pops.genome_length()) {
    throw std::invalid_argument("step_generation_into: output shape differs from input");
  }
  d.sample_generation(pops, rng, next);
  next.generation = pops.generation + 1;
}

PairedPopulations step_generation(const PairedPopulations& pops, const InteractionDistribution& d,
                                  RandomStream& rng) {
  PairedPopulations next = pops;
  step_generation_into(pops, d, rng, next);
  return next;
}

void PdcoeaConfig::validate() const {
  if (lambda == 0) throw std::invalid_argument("config: lambda must be positive");
  const auto nd = static_cast<double>(n());
  if (!(chi > 0.0 && chi <= nd)) {
    throw std::invalid_argument(fmt::format("config: chi={} outside (0, {}]", chi, n()));
  }
  if (budget_generations == 0) {
    throw std::invalid_argument("config: budget_generations must be positive");
  }
}

TrajectoryRow summarize(const PairedPopulations& pops, const BilinearParams& p) {
  TrajectoryRow row{};
  row.generation = pops.generation;
  const auto lambda = static_cast<double>(pops.lambda());

  std::int64_t sum = 0;
  std::size_t in_r0_count = 0;
  row.predator_min = static_cast<std::int64_t>(pops.genome_length());
  row.predator_max = 0;
  for (const auto& x : pops.predators) {
    const auto c = static_cast<std::int64_t>(ones(x));
    sum += c;
    row.predator_min = std::min(row.predator_min, c);
    row.predator_max = std::max(row.predator_max, c);
    if (in_r0(c, p)) ++in_r0_count;
  }
  row.predator_mean = static_cast<double>(sum) / lambda;
  row.p0 = static_cast<double>(in_r0_count) / lambda;

  sum = 0;
  row.prey_min = static_cast<std::int64_t>(pops.genome_length());
  row.prey_max = 0;
  row.prey_in_s0 = 0;
  for (const auto& y : pops.prey) {
    const auto c = static_cast<std::int64_t>(ones(y));
    sum += c;
    row.prey_min = std::min(row.prey_min, c);
    row.prey_max = std::max(row.prey_max, c);
    if (in_s0(c, p)) ++row.prey_in_s0;
  }
  row.prey_mean = static_cast<double>(sum) / lambda;
  row.q0 = static_cast<double>(row.prey_in_s0) / lambda;
  return row;
}

TargetPredicate singleton_target(BitVector x_star, BitVector y_star) {
  return [x_star = std::move(x_star), y_star = std::move(y_star)](const PairedPopulations& pops) {
    return std::find(pops.predators.begin(), pops.predators.end(), x_star) !=
               pops.predators.end() &&
           std::find(pops.prey.begin(), pops.prey.end(), y_star) != pops.prey.end();
  };
}

TrialRecord run_trial(const PdcoeaConfig& cfg, const TargetPredicate& target,
                      const GenerationObserver& observer) {
  cfg.validate();
  RandomStream rng(cfg.seed);
  const std::size_t n = cfg.n();

  Population predators = uniform_population(cfg.lambda, n, rng);
  Population prey = uniform_population(cfg.lambda, n, rng);
  PairedPopulations current(std::move(predators), std::move(prey), 0);
  PairedPopulations next = current;

  const PdcoeaInteraction interaction(cfg.dominance ? *cfg.dominance : bilinear_dominance(cfg.game),
                                      n, cfg.chi);
  const auto met = [&](const PairedPopulations& pops) {
    return target ? target(pops) : target_hit(pops, cfg.game);
  };

  TrialRecord record;
  record.seed = cfg.seed;
  for (std::uint64_t t = 0;; ++t) {
    if (cfg.record_trajectory) record.trajectory.push_back(summarize(current, cfg.game));
    if (observer) observer(current);
    if (met(current)) {
      record.hit = true;
      record.generations_run = t;
      record.T_interactions = t * cfg.lambda;
      return record;
    }
    if (t == cfg.budget_generations) break;
    step_generation_into(current, interaction, rng, next);
    std::swap(current, next);
  }
  record.hit = false;
  record.generations_run = cfg.budget_generations;
  record.T_interactions = cfg.budget_generations * cfg.lambda;
  return record;
}

}  // namespace coevo
