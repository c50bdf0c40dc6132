#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "coevo/levels.hpp"

namespace coevo {

namespace {

// Exact ratios are quotients of integers, so only the last rounding of the
// bound expression separates a tight case from a violation.
bool meets(double ratio, double bound, bool strict) {
  const double slack = 1e-12 * std::max(1.0, std::abs(bound));
  return strict ? ratio > bound - slack : ratio >= bound - slack;
}

double selected(const PairedPopulations& pops, const DominanceOracle& dom,
                const std::function<bool(std::int64_t, std::int64_t)>& in_c) {
  return exact_selection_distribution(pops, dom,
                                      [&](const BitVector& x, const BitVector& y) {
                                        return in_c(static_cast<std::int64_t>(ones(x)),
                                                    static_cast<std::int64_t>(ones(y)));
                                      })
      .value();
}

}  // namespace

GrowthReport check_growth_lemma(const GrowthCase& c, const PairedPopulations& pops,
                                const BilinearParams& p) {
  const FractionStats f = fraction_stats(pops, c.k, c.l, p);
  const double p0 = f.p0();
  const double pk = f.p_k();
  const double q0 = f.q0();
  const double q = f.q_l();
  const DominanceOracle dom = bilinear_dominance(p);

  const auto r0 = [&](std::int64_t x, std::int64_t) { return in_r0(x, p); };
  const auto s1 = [&](std::int64_t, std::int64_t y) {
    return y >= c.l && !in_s0(y, p);
  };
  const auto r01 = [&](std::int64_t x, std::int64_t) {
    return x < static_cast<std::int64_t>(p.n()) - c.k;
  };

  GrowthReport r{c.lemma, false, 0.0, 0.0, true, false};
  switch (c.lemma) {
    case 15:
      r.hypotheses_met =
          c.delta1 > 0.0 && c.delta1 < 1.0 && 1.0 / 3.0 < p0 && p0 < 1.0 - c.delta1 && q > 0.0;
      r.bound = 1.0 + std::min(c.delta1 / 2.0 - 8.0 * q0, 0.1 - 12.0 * q0);
      if (r.hypotheses_met) r.ratio = (selected(pops, dom, r0) / p0) * (selected(pops, dom, s1) / q);
      break;
    case 16:
      r.hypotheses_met = c.rho > 0.0 && c.rho < 1.0 && p0 * q < 1.0 - c.rho &&
                         p0 >= 1.0 - c.rho / 10.0 && q0 < c.rho / 90.0 && q > 0.0;
      r.bound = 1.0 + c.rho / 300.0 * (40.0 - c.rho * (17.0 - c.rho));
      if (r.hypotheses_met) r.ratio = (selected(pops, dom, r0) / p0) * (selected(pops, dom, s1) / q);
      break;
    case 17:
      r.strict = false;
      r.hypotheses_met = p0 > 0.0;
      r.bound = 0.5 * ((3.0 + q0) * (1.0 - q0) - p0 * (1.0 - q0 * (2.0 + q0)));
      if (r.hypotheses_met) r.ratio = selected(pops, dom, r0) / p0;
      break;
    case 18:
      r.hypotheses_met = q > 0.0;
      r.bound = 1.5 * (2.0 - p0) * p0 * (1.0 - q) + q - 4.0 * q0;
      if (r.hypotheses_met) r.ratio = selected(pops, dom, s1) / q;
      break;
    case 19:
      r.hypotheses_met = c.rho > 0.0 && c.rho < 1.0 &&
                         q0 <= std::sqrt(2.0 * (1.0 - c.rho)) - 1.0 && p0 + pk > 0.0;
      r.bound = 1.0 + c.rho * (1.0 - pk - p0);
      if (r.hypotheses_met) r.ratio = selected(pops, dom, r01) / (p0 + pk);
      break;
    default:
      throw std::invalid_argument(fmt::format("no growth lemma {}", c.lemma));
  }
  r.pass = r.hypotheses_met && meets(r.ratio, r.bound, r.strict);
  return r;
}

}  // namespace coevo
