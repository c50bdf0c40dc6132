#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "coevo/bilinear.hpp"
#include "coevo/pdcoea.hpp"
#include "coevo/population.hpp"
#include "coevo/random.hpp"

namespace coevo {

/// Closed integer interval [lo, hi] of one-counts; empty when lo > hi.
struct CountInterval {
  std::int64_t lo;
  std::int64_t hi;

  bool contains(std::int64_t c) const noexcept { return lo <= c && c <= hi; }
  bool empty() const noexcept { return lo > hi; }
  friend bool operator==(const CountInterval&, const CountInterval&) = default;
};

struct Level {
  CountInterval predators;  // A_j
  CountInterval prey;       // B_j
  int phase;                // 0 for the full space, then 1 or 2
  std::int64_t index;       // j within its phase

  bool contains(std::int64_t ones_x, std::int64_t ones_y) const noexcept {
    return predators.contains(ones_x) && prey.contains(ones_y);
  }
};

/// Levels 1..m, stored 0-based. levels.front() is always X x Y.
struct LevelSequence {
  std::vector<Level> levels;
  std::size_t m() const noexcept { return levels.size(); }
  /// 1-based access matching the usual level numbering.
  const Level& level(std::size_t j) const { return levels.at(j - 1); }
};

/// Level 1 is X x Y. Phase 1 continues with |x| < n - j, |y| < (alpha-eps)n
/// for j = 1..floor((1-beta)n); phase 2 with R0 x S1(j) for
/// j = 0..ceil((alpha-eps)n), so the last level is exactly the target set.
LevelSequence build_bilinear_levels(const BilinearParams& p);

/// |(P x Q) & (A x B)| = #{P in A} * #{Q in B}.
std::uint64_t pairs_in_level(const PairedPopulations& pops, const Level& level);

/// Largest 1-based j with pairs_in_level >= gamma0 * lambda^2. Throws
/// std::invalid_argument unless 0 < gamma0 < 1.
std::size_t current_level(const PairedPopulations& pops, const LevelSequence& seq, double gamma0);

inline constexpr double kGamma0 = 9.0 / 25.0;

/// Population fractions in R0, R1(k), S0 and S1(l), kept as counts over
/// lambda so partitions sum exactly.
struct FractionStats {
  std::size_t lambda;
  std::size_t r0, r1, r2;
  std::size_t s0, s1, s2;

  double p0() const noexcept { return frac(r0); }
  double p_k() const noexcept { return frac(r1); }
  double q0() const noexcept { return frac(s0); }
  double q_l() const noexcept { return frac(s1); }

 private:
  double frac(std::size_t c) const noexcept {
    return static_cast<double>(c) / static_cast<double>(lambda);
  }
};

FractionStats fraction_stats(const PairedPopulations& pops, std::int64_t k, std::int64_t l,
                             const BilinearParams& p);

/// An exact probability hits / total.
struct ExactProbability {
  std::uint64_t hits = 0;
  std::uint64_t total = 0;

  double value() const noexcept {
    return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
  }
};

class EnumerationTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

inline constexpr std::size_t kEnumerationCap = 12;

using PairPredicate = std::function<bool(const BitVector& x, const BitVector& y)>;

/// Probability that select_pair returns a pair in C, by enumerating all
/// lambda^4 equally likely index draws. Throws EnumerationTooLarge when
/// lambda exceeds cap.
ExactProbability exact_selection_distribution(const PairedPopulations& pops,
                                              const DominanceOracle& dom, const PairPredicate& in_c,
                                              std::size_t cap = kEnumerationCap);

/// The four conditional probabilities of (x1,y1) dominating (x2,y2) for two
/// uniform draws from P x Q, conditioned on
///   0: |y1| <= |y2|, |x1| > beta n, |x2| > beta n
///   1: |y1| >= |y2|, |x1| < beta n, |x2| < beta n
///   2: |x1| >= |x2|, |y1| > alpha n, |y2| > alpha n
///   3: |x1| <= |x2|, |y1| < alpha n, |y2| < alpha n
/// Each entry holds (dominating draws, conditioning draws); a zero total
/// means the conditioning event is null.
std::array<ExactProbability, 4> half_probability_conditionals(const PairedPopulations& pops,
                                                              const BilinearParams& p,
                                                              std::size_t cap = kEnumerationCap);

/// Selection growth inequalities for the Bilinear regions.
///   15: 1/3 < p0 < 1 - delta1  =>
///       [Psel(R0)/p0][Psel(S1)/q] > 1 + min(delta1/2 - 8 q0, 1/10 - 12 q0)
///   16: p0 q < 1 - rho, p0 >= 1 - rho/10, q0 < rho/90  =>
///       [Psel(R0)/p0][Psel(S1)/q] > 1 + rho/300 (40 - rho (17 - rho))
///   17: Psel(R0)/p0 >= ((3 + q0)(1 - q0) - p0 (1 - q0 (2 + q0))) / 2
///   18: Psel(S1)/q > 3/2 (2 - p0) p0 (1 - q) + q - 4 q0
///   19: q0 <= sqrt(2 (1 - rho)) - 1  =>
///       Psel(R0 u R1)/(p0 + p) > 1 + rho (1 - p - p0)
/// where p = p(k), q = q(l), S1 = S1(l), R1 = R1(k).
struct GrowthCase {
  int lemma;
  std::int64_t k = 0;
  std::int64_t l = 0;
  double delta1 = 0.5;
  double rho = 0.1;
};

struct GrowthReport {
  int lemma;
  bool hypotheses_met;
  double ratio;
  double bound;
  bool strict;
  bool pass;  // false whenever the hypotheses are unmet
};

GrowthReport check_growth_lemma(const GrowthCase& c, const PairedPopulations& pops,
                                const BilinearParams& p);

/// Level function on (count k in [0, lambda^2], level j in [1, m]).
using LevelFunction = std::function<double(std::int64_t k, std::size_t j)>;

struct LevelFunctionCheck {
  bool ok;
  std::string violation;  // first failing condition, empty when ok
};

/// Checks exhaustively
///   g(k, j) >= g(k + 1, j),  g(k, j) >= g(k, j + 1),  g(lambda^2, j) >= g(0, j + 1).
LevelFunctionCheck check_level_function(const LevelFunction& g, std::size_t lambda, std::size_t m);
bool validate_level_function(const LevelFunction& g, std::size_t lambda, std::size_t m);

struct LevelFunctionParams {
  double eta;
  double phi;
  std::vector<double> z;  // z_1 .. z_{m-1}
  std::size_t lambda;
  std::size_t m;

  /// q_j = lambda z_j / (4 + lambda z_j), 1-based.
  double q(std::size_t j) const;
  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

/// eta = (1 - 1/sqrt(1 + delta)) / lambda, which lies strictly between
/// 3 delta / (11 lambda) and delta / (2 lambda).
double reference_eta(double delta, std::size_t lambda);

struct ReferenceLevelFunctions {
  LevelFunction g1;  // eta/(1+eta) ((m - j) lambda^2 - k)
  LevelFunction g2;  // phi (e^{-eta k}/q_j + sum_{i=j+1}^{m-1} 1/q_i), zero at j = m
  LevelFunction sum;
};

ReferenceLevelFunctions reference_g1_g2(const LevelFunctionParams& params);

/// 3 eta lambda^2 m / z_*, the upper bound on g(0, 1).
double level_function_origin_bound(const LevelFunctionParams& params);

}  // namespace coevo
