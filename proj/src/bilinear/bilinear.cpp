#include "coevo/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

namespace coevo {

namespace {

double snap(double v) {
  const double r = std::round(v * 64.0) / 64.0;
  return std::abs(v - r) <= 1e-9 * std::max(1.0, std::abs(v)) ? r : v;
}

void require_length(const BitVector& v, const BilinearParams& p, const char* what) {
  if (v.size() != p.n()) {
    throw std::invalid_argument(
        fmt::format("{}: length {} does not match n={}", what, v.size(), p.n()));
  }
}

void require_count(std::int64_t c, const BilinearParams& p) {
  if (c < 0 || c > static_cast<std::int64_t>(p.n())) {
    throw std::invalid_argument(fmt::format("one-count {} outside [0, {}]", c, p.n()));
  }
}

std::int64_t count_of(const BitVector& v) { return static_cast<std::int64_t>(ones(v)); }

}  // namespace

BilinearParams BilinearParams::make(std::size_t n, double alpha, double beta, double epsilon) {
  if (n == 0) throw std::invalid_argument("Bilinear: n must be positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument(fmt::format("Bilinear: alpha={} outside [0,1]", alpha));
  }
  if (!(beta >= 0.0 && beta <= 1.0)) {
    throw std::invalid_argument(fmt::format("Bilinear: beta={} outside [0,1]", beta));
  }
  const double nd = static_cast<double>(n);
  if (!(snap(epsilon * nd) >= 1.0)) {
    throw std::invalid_argument(fmt::format("Bilinear: epsilon={} below 1/n", epsilon));
  }
  BilinearParams p;
  p.n_ = n;
  p.alpha_ = alpha;
  p.beta_ = beta;
  p.epsilon_ = epsilon;
  p.alpha_n_ = snap(alpha * nd);
  p.beta_n_ = snap(beta * nd);
  p.target_low_ = snap((alpha - epsilon) * nd);
  return p;
}

bool BilinearParams::theorem9_regime() const noexcept {
  const double nd = static_cast<double>(n_);
  return target_low_ >= snap(0.8 * nd) && beta_n_ < snap(epsilon_ * nd);
}

std::string BilinearParams::describe() const {
  return fmt::format("n={} alpha={} beta={} epsilon={}", n_, alpha_, beta_, epsilon_);
}

double payoff_counts(std::int64_t ones_x, std::int64_t ones_y, const BilinearParams& p) {
  const auto x = static_cast<double>(ones_x);
  const auto y = static_cast<double>(ones_y);
  return y * (x - p.beta_n()) - p.alpha_n() * x;
}

double payoff(const BitVector& x, const BitVector& y, const BilinearParams& p) {
  require_length(x, p, "payoff");
  require_length(y, p, "payoff");
  return payoff_counts(count_of(x), count_of(y), p);
}

double worst_case_f_count(std::int64_t ones_x, const BilinearParams& p) {
  require_count(ones_x, p);
  const auto x = static_cast<double>(ones_x);
  if (x < p.beta_n()) return payoff_counts(ones_x, static_cast<std::int64_t>(p.n()), p);
  return -p.alpha_n() * x;
}

double worst_case_f(const BitVector& x, const BilinearParams& p) {
  require_length(x, p, "worst_case_f");
  return worst_case_f_count(count_of(x), p);
}

bool dominates(const BitVector& x1, const BitVector& y1, const BitVector& x2,
               const BitVector& y2, const BilinearParams& p) {
  const double g12 = payoff(x1, y2, p);
  const double g11 = payoff(x1, y1, p);
  const double g21 = payoff(x2, y1, p);
  return g12 >= g11 && g11 >= g21;
}

bool dominates_by_onecounts(std::int64_t x1, std::int64_t y1, std::int64_t x2, std::int64_t y2,
                            const BilinearParams& p) {
  require_count(x1, p);
  require_count(y1, p);
  require_count(x2, p);
  require_count(y2, p);
  const double dx = static_cast<double>(x1) - p.beta_n();
  const double dy = static_cast<double>(y1) - p.alpha_n();
  return static_cast<double>(y2) * dx >= static_cast<double>(y1) * dx &&
         static_cast<double>(x1) * dy >= static_cast<double>(x2) * dy;
}

std::string_view to_string(RegionTag tag) noexcept {
  switch (tag) {
    case RegionTag::R0: return "R0";
    case RegionTag::R1: return "R1";
    case RegionTag::R2: return "R2";
    case RegionTag::S0: return "S0";
    case RegionTag::S1: return "S1";
    case RegionTag::S2: return "S2";
  }
  return "?";
}

bool in_r0(std::int64_t ones_x, const BilinearParams& p) noexcept {
  return static_cast<double>(ones_x) < p.beta_n();
}

bool in_s0(std::int64_t ones_y, const BilinearParams& p) noexcept {
  return static_cast<double>(ones_y) >= p.alpha_n();
}

bool in_target_band(std::int64_t ones_y, const BilinearParams& p) noexcept {
  const auto y = static_cast<double>(ones_y);
  return y >= p.target_low() && y < p.alpha_n();
}

Region classify_predator_count(std::int64_t ones_x, std::int64_t k, const BilinearParams& p) {
  require_count(ones_x, p);
  const double nd = static_cast<double>(p.n());
  if (k < 0 || static_cast<double>(k) > nd - p.beta_n()) {
    throw std::invalid_argument(fmt::format("predator threshold k={} outside [0, (1-beta)n]", k));
  }
  if (in_r0(ones_x, p)) return {RegionTag::R0, k};
  if (static_cast<double>(ones_x) < nd - static_cast<double>(k)) return {RegionTag::R1, k};
  return {RegionTag::R2, k};
}

Region classify_predator(const BitVector& x, std::int64_t k, const BilinearParams& p) {
  require_length(x, p, "classify_predator");
  return classify_predator_count(count_of(x), k, p);
}

Region classify_prey_count(std::int64_t ones_y, std::int64_t l, const BilinearParams& p) {
  require_count(ones_y, p);
  if (l < 0 || !(static_cast<double>(l) < p.alpha_n())) {
    throw std::invalid_argument(fmt::format("prey threshold l={} outside [0, alpha n)", l));
  }
  if (in_s0(ones_y, p)) return {RegionTag::S0, l};
  if (ones_y >= l) return {RegionTag::S1, l};
  return {RegionTag::S2, l};
}

Region classify_prey(const BitVector& y, std::int64_t l, const BilinearParams& p) {
  require_length(y, p, "classify_prey");
  return classify_prey_count(count_of(y), l, p);
}

bool target_hit(const PairedPopulations& pops, const BilinearParams& p) {
  const bool predator = std::any_of(pops.predators.begin(), pops.predators.end(),
                                    [&](const BitVector& x) { return in_r0(count_of(x), p); });
  if (!predator) return false;
  return std::any_of(pops.prey.begin(), pops.prey.end(),
                     [&](const BitVector& y) { return in_target_band(count_of(y), p); });
}

bool is_intransitive_cycle(const DominanceCycle& c, const BilinearParams& p) {
  const auto dom = [&](const OneCountPair& a, const OneCountPair& b) {
    return dominates_by_onecounts(a.x, a.y, b.x, b.y, p);
  };
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = i + 1; j < 4; ++j) {
      if (c[i] == c[j]) return false;
    }
  }
  for (std::size_t i = 0; i < 4; ++i) {
    if (!dom(c[i], c[(i + 1) % 4])) return false;
  }
  for (std::size_t i = 0; i < 2; ++i) {
    if (dom(c[i], c[i + 2]) || dom(c[i + 2], c[i])) return false;
  }
  return true;
}

namespace {

std::optional<DominanceCycle> search_cycle(const std::vector<OneCountPair>& points,
                                           const BilinearParams& p) {
  const std::size_t m = points.size();
  // successors[i] = indices j != i with points[i] dominating points[j]
  std::vector<std::vector<std::size_t>> successors(m);
  std::vector<std::vector<bool>> dom(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      dom[i][j] = dominates_by_onecounts(points[i].x, points[i].y, points[j].x, points[j].y, p);
      if (i != j && dom[i][j]) successors[i].push_back(j);
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b : successors[a]) {
      for (std::size_t c : successors[b]) {
        if (c == a || dom[a][c] || dom[c][a]) continue;
        for (std::size_t d : successors[c]) {
          if (d == a || d == b || !dom[d][a] || dom[b][d] || dom[d][b]) continue;
          return DominanceCycle{points[a], points[b], points[c], points[d]};
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<DominanceCycle> intransitivity_witness(const BilinearParams& p) {
  const auto n = static_cast<std::int64_t>(p.n());
  const auto cx = static_cast<std::int64_t>(std::llround(p.beta_n()));
  const auto cy = static_cast<std::int64_t>(std::llround(p.alpha_n()));

  std::vector<OneCountPair> local;
  for (std::int64_t x = std::max<std::int64_t>(0, cx - 3); x <= std::min(n, cx + 3); ++x) {
    for (std::int64_t y = std::max<std::int64_t>(0, cy - 3); y <= std::min(n, cy + 3); ++y) {
      local.push_back({x, y});
    }
  }
  if (auto found = search_cycle(local, p)) return found;

  std::vector<OneCountPair> grid;
  grid.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (std::int64_t x = 0; x <= n; ++x) {
    for (std::int64_t y = 0; y <= n; ++y) grid.push_back({x, y});
  }
  return search_cycle(grid, p);
}

}  // namespace coevo
