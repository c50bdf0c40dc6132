#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "coevo/bitvector.hpp"
#include "coevo/population.hpp"

namespace coevo {

/// Parameters of the Bilinear maximin game
///   g(x, y) = |y| (|x| - beta n) - alpha n |x|
/// plus the approximation slack epsilon that defines the target band.
///
/// The scaled thresholds alpha*n, beta*n and (alpha-epsilon)*n are snapped to
/// the nearest multiple of 1/64 when they lie within 1e-9 of it, so that
/// thresholds such as 0.05 * 80 compare exactly against integer one-counts.
/// With snapped thresholds every payoff is an exact double for n < 2^20.
class BilinearParams {
 public:
  /// n = 1, alpha = beta = 0, epsilon = 1.
  BilinearParams() = default;

  /// Throws std::invalid_argument unless n >= 1, alpha and beta lie in
  /// [0, 1] and epsilon >= 1/n.
  static BilinearParams make(std::size_t n, double alpha, double beta, double epsilon);

  std::size_t n() const noexcept { return n_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double epsilon() const noexcept { return epsilon_; }

  double alpha_n() const noexcept { return alpha_n_; }
  double beta_n() const noexcept { return beta_n_; }
  /// (alpha - epsilon) * n, the lower edge of the prey target band.
  double target_low() const noexcept { return target_low_; }

  /// alpha - epsilon >= 4/5 and beta < epsilon. Reported, never enforced.
  bool theorem9_regime() const noexcept;

  std::string describe() const;

 private:
  std::size_t n_ = 1;
  double alpha_ = 0;
  double beta_ = 0;
  double epsilon_ = 1;
  double alpha_n_ = 0;
  double beta_n_ = 0;
  double target_low_ = 0;
};

/// g evaluated on one-counts.
double payoff_counts(std::int64_t ones_x, std::int64_t ones_y, const BilinearParams& p);

/// g(x, y). Throws std::invalid_argument when a length differs from p.n().
double payoff(const BitVector& x, const BitVector& y, const BilinearParams& p);

/// min over all prey y of g(x, y): the adversary answers |y| = n when
/// |x| < beta n and |y| = 0 when |x| > beta n.
double worst_case_f_count(std::int64_t ones_x, const BilinearParams& p);
double worst_case_f(const BitVector& x, const BilinearParams& p);

/// (x1, y1) dominates (x2, y2) iff g(x1, y2) >= g(x1, y1) >= g(x2, y1).
/// Ties count as domination.
bool dominates(const BitVector& x1, const BitVector& y1, const BitVector& x2,
               const BitVector& y2, const BilinearParams& p);

/// The same relation written on one-counts:
///   |y2| (|x1| - beta n) >= |y1| (|x1| - beta n)  and
///   |x1| (|y1| - alpha n) >= |x2| (|y1| - alpha n).
/// Throws std::invalid_argument for a count outside [0, n].
bool dominates_by_onecounts(std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2,
                            const BilinearParams& p);

enum class RegionTag { R0, R1, R2, S0, S1, S2 };

std::string_view to_string(RegionTag tag) noexcept;

struct Region {
  RegionTag tag;
  std::int64_t threshold;  // k for predator regions, l for prey regions

  friend bool operator==(const Region&, const Region&) = default;
};

/// R0: |x| < beta n;  R1(k): beta n <= |x| < n - k;  R2(k): |x| >= n - k.
/// Requires 0 <= k <= (1 - beta) n.
Region classify_predator_count(std::int64_t ones_x, std::int64_t k, const BilinearParams& p);
Region classify_predator(const BitVector& x, std::int64_t k, const BilinearParams& p);

/// S0: |y| >= alpha n;  S1(l): l <= |y| < alpha n;  S2(l): |y| < l.
/// Requires 0 <= l < alpha n.
Region classify_prey_count(std::int64_t ones_y, std::int64_t l, const BilinearParams& p);
Region classify_prey(const BitVector& y, std::int64_t l, const BilinearParams& p);

/// Predicates on one-counts shared by the target check and the statistics.
bool in_r0(std::int64_t ones_x, const BilinearParams& p) noexcept;
bool in_s0(std::int64_t ones_y, const BilinearParams& p) noexcept;
bool in_target_band(std::int64_t ones_y, const BilinearParams& p) noexcept;

/// Some predator lies in R0 and some prey lies in S1((alpha - epsilon) n).
bool target_hit(const PairedPopulations& pops, const BilinearParams& p);

struct OneCountPair {
  std::int64_t x;
  std::int64_t y;
  friend bool operator==(const OneCountPair&, const OneCountPair&) = default;
};

using DominanceCycle = std::array<OneCountPair, 4>;

/// Four distinct one-count pairs q1 >= q2 >= q3 >= q4 >= q1 (>= meaning
/// domination) where no pair dominates, or is dominated by, the pair two
/// steps away. Searches the +-3 neighbourhood of (beta n, alpha n) first and
/// then the whole (n+1)^2 grid.
std::optional<DominanceCycle> intransitivity_witness(const BilinearParams& p);

/// Re-checks every condition intransitivity_witness promises.
bool is_intransitive_cycle(const DominanceCycle& cycle, const BilinearParams& p);

}  // namespace coevo
