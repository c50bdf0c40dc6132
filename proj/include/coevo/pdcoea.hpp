#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "coevo/bilinear.hpp"
#include "coevo/bitvector.hpp"
#include "coevo/population.hpp"
#include "coevo/random.hpp"

namespace coevo {

/// Pairwise dominance test between two predator-prey pairs. Wraps an
/// arbitrary predicate; oracles built from a Bilinear game also carry the
/// game so hot loops can decide dominance from cached one-counts.
class DominanceOracle {
 public:
  using Fn = std::function<bool(const BitVector& x1, const BitVector& y1, const BitVector& x2,
                                const BitVector& y2)>;

  explicit DominanceOracle(Fn fn) : fn_(std::move(fn)) {}

  bool operator()(const BitVector& x1, const BitVector& y1, const BitVector& x2,
                  const BitVector& y2) const {
    return fn_(x1, y1, x2, y2);
  }

  const BilinearParams* bilinear() const noexcept { return game_ ? &*game_ : nullptr; }

  friend DominanceOracle bilinear_dominance(const BilinearParams& p);

 private:
  Fn fn_;
  std::optional<BilinearParams> game_;
};

DominanceOracle bilinear_dominance(const BilinearParams& p);

/// The four uniform indices behind one selection, in draw order.
struct DrawIndices {
  std::size_t x1;
  std::size_t y1;
  std::size_t x2;
  std::size_t y2;
};

struct Selection {
  std::size_t predator;
  std::size_t prey;
  friend bool operator==(const Selection&, const Selection&) = default;
};

/// Draws x1, y1, x2, y2 in that order, each uniform in [0, lambda).
DrawIndices draw_indices(std::size_t lambda, RandomStream& rng);

/// (x1, y1) if it dominates (x2, y2), otherwise (x2, y2).
Selection resolve_selection(const PairedPopulations& pops, const DominanceOracle& dom,
                            const DrawIndices& draws);

Selection select_pair(const PairedPopulations& pops, const DominanceOracle& dom,
                      RandomStream& rng);

/// Flips each of n bits independently with probability chi / n.
///
/// The flip count is drawn by inverse transform from a Binomial(n, chi/n)
/// table built once per instance with +, -, *, / only (platform-exact), and
/// the flipped positions are a uniform subset of that size (Floyd's method).
class BitwiseMutation {
 public:
  /// Throws std::invalid_argument unless n >= 1 and 0 <= chi <= n.
  BitwiseMutation(std::size_t n, double chi);

  std::size_t n() const noexcept { return n_; }
  double chi() const noexcept { return chi_; }
  double flip_probability() const noexcept { return p_; }

  void apply(BitVector& v, RandomStream& rng) const;
  BitVector operator()(const BitVector& v, RandomStream& rng) const;

  /// Number of bits to flip, distributed Binomial(n, chi/n).
  std::size_t sample_flip_count(RandomStream& rng) const;

 private:
  void flip_distinct(BitVector& v, std::size_t count, RandomStream& rng) const;

  std::size_t n_;
  double chi_;
  double p_;
  std::vector<double> cumulative_;  // unnormalised running sums of the pmf
};

/// Copy of v with each bit flipped with probability chi / n.
BitVector mutate(const BitVector& v, double chi, RandomStream& rng);

/// Source of offspring pairs for one generation. The lambda pairs of a
/// generation must be i.i.d. given the current populations.
class InteractionDistribution {
 public:
  virtual ~InteractionDistribution() = default;

  /// Writes one offspring pair into x and y (already sized to n).
  virtual void sample_into(const PairedPopulations& pops, RandomStream& rng, BitVector& x,
                           BitVector& y) const = 0;

  /// Fills every slot of next with a fresh pair. The default calls
  /// sample_into lambda times; overrides may cache per-generation data.
  virtual void sample_generation(const PairedPopulations& pops, RandomStream& rng,
                                 PairedPopulations& next) const;

  std::pair<BitVector, BitVector> sample(const PairedPopulations& pops, RandomStream& rng) const;
};

/// Pairwise dominance selection followed by independent bitwise mutation of
/// both selected individuals.
class PdcoeaInteraction final : public InteractionDistribution {
 public:
  PdcoeaInteraction(DominanceOracle dom, std::size_t n, double chi);

  void sample_into(const PairedPopulations& pops, RandomStream& rng, BitVector& x,
                   BitVector& y) const override;
  void sample_generation(const PairedPopulations& pops, RandomStream& rng,
                         PairedPopulations& next) const override;

  const DominanceOracle& dominance() const noexcept { return dom_; }
  const BitwiseMutation& mutation() const noexcept { return mutation_; }

 private:
  DominanceOracle dom_;
  BitwiseMutation mutation_;
};

std::pair<BitVector, BitVector> pdcoea_interaction(const PairedPopulations& pops,
                                                   const DominanceOracle& dom, double chi,
                                                   RandomStream& rng);

/// Produces generation t + 1. Slot i of both offspring populations comes
/// from the same interaction.
PairedPopulations step_generation(const PairedPopulations& pops, const InteractionDistribution& d,
                                  RandomStream& rng);

/// As step_generation, writing into next (same shape as pops) without
/// allocating.
void step_generation_into(const PairedPopulations& pops, const InteractionDistribution& d,
                          RandomStream& rng, PairedPopulations& next);

struct PdcoeaConfig {
  std::size_t lambda = 1;
  double chi = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t budget_generations = 1;
  BilinearParams game;
  /// Overrides the dominance relation derived from game when set.
  std::optional<DominanceOracle> dominance;
  bool record_trajectory = true;

  std::size_t n() const noexcept { return game.n(); }
  /// Throws std::invalid_argument unless lambda >= 1, 0 < chi <= n and
  /// budget_generations >= 1.
  void validate() const;
};

/// Population summary at one generation.
struct TrajectoryRow {
  std::uint64_t generation;
  double predator_mean;
  std::int64_t predator_min;
  std::int64_t predator_max;
  double prey_mean;
  std::int64_t prey_min;
  std::int64_t prey_max;
  std::size_t prey_in_s0;
  double p0;
  double q0;

  friend bool operator==(const TrajectoryRow&, const TrajectoryRow&) = default;
};

TrajectoryRow summarize(const PairedPopulations& pops, const BilinearParams& p);

struct TrialRecord {
  bool hit = false;
  /// t * lambda for the first generation t that meets the target, or
  /// budget * lambda when the budget ran out.
  std::uint64_t T_interactions = 0;
  std::uint64_t generations_run = 0;
  std::uint64_t seed = 0;
  std::vector<TrajectoryRow> trajectory;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

using TargetPredicate = std::function<bool(const PairedPopulations&)>;
using GenerationObserver = std::function<void(const PairedPopulations&)>;

/// Target met when some predator equals x_star and some prey equals y_star.
TargetPredicate singleton_target(BitVector x_star, BitVector y_star);

/// Uniform initial populations, then generations until the target holds or
/// the budget is spent. The target (default: the Bilinear epsilon target of
/// cfg.game) is checked at t = 0, 1, ..., budget before producing offspring.
/// The observer sees every checked generation.
TrialRecord run_trial(const PdcoeaConfig& cfg, const TargetPredicate& target = {},
                      const GenerationObserver& observer = {});

}  // namespace coevo
