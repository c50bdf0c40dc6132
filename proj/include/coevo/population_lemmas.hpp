#pragma once

#include <cstddef>
#include <cstdint>

#include "coevo/pdcoea.hpp"

namespace coevo {

/// How membership of x in A and of y in B relate within one interaction.
enum class Coupling { Independent, Comonotone, Anti };

/// Interaction distribution on length-1 genomes: bit 0 of x marks x in A and
/// bit 0 of y marks y in B, with P(x in A) = pa and P(y in B) = pb.
class EngineeredInteraction final : public InteractionDistribution {
 public:
  EngineeredInteraction(double pa, double pb, Coupling coupling);

  void sample_into(const PairedPopulations& pops, RandomStream& rng, BitVector& x,
                   BitVector& y) const override;

 private:
  double pa_;
  double pb_;
  Coupling coupling_;
};

struct PopulationLemmaSetup {
  std::size_t lambda = 20;
  double pa = 0.8;
  double pb = 0.8;
  double delta = 0.5;
  double gamma = 0.4;
  double delta1 = 0.25;
  Coupling coupling = Coupling::Independent;
  std::size_t samples = 20000;
  std::uint64_t seed = 1;
};

/// Monte Carlo estimates against the three bounds on
/// Z = |(P' x Q') & (A x B)| after one generation:
///   mean(Z) >= lambda (lambda - 1)(1 + delta) gamma
///   mean(e^{-eta Z}) <= e^{-eta lambda (gamma lambda - 1)},
///       eta = (1 - (1 + delta)^{-1/2}) / lambda
///   P(Z < lambda (gamma lambda - 1))
///       <= exp(-delta1 gamma lambda (1 - sqrt((1 + delta1)/(1 + delta))))
/// Each comparison allows six standard errors.
struct ProductCountReport {
  bool premise;  // pa * pb >= (1 + delta) gamma
  double mean_z, mean_z_se, mean_bound;
  double mgf, mgf_se, mgf_bound;
  double tail, tail_bound;
  bool mean_ok, mgf_ok, tail_ok;
  bool pass() const noexcept { return premise && mean_ok && mgf_ok && tail_ok; }
};

ProductCountReport check_product_count_lemma(const PopulationLemmaSetup& s);

/// Monte Carlo estimate of r = P(P' x Q' meets A x B) against
/// 1/r < 3 / (z (lambda - 1)) + 1 with z = pa * pb.
struct UpgradeReport {
  double r, r_se;
  double inverse_bound;
  bool pass;
};

UpgradeReport check_upgrade_lemma(const PopulationLemmaSetup& s);

}  // namespace coevo
