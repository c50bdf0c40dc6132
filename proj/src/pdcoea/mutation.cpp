#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "coevo/pdcoea.hpp"

namespace coevo {

BitwiseMutation::BitwiseMutation(std::size_t n, double chi) : n_(n), chi_(chi) {
  if (n == 0) throw std::invalid_argument("mutation: n must be positive");
  const auto nd = static_cast<double>(n);
  if (!(chi >= 0.0 && chi <= nd)) {
    throw std::invalid_argument(fmt::format("mutation: chi={} outside [0, {}]", chi, n));
  }
  p_ = chi / nd;
  if (p_ == 0.0 || p_ == 1.0) return;

  // Binomial pmf up to a common factor, grown outward from the mode by the
  // ratio of neighbouring terms.
  std::vector<double> w(n + 1, 0.0);
  const double odds = p_ / (1.0 - p_);
  const auto mode = std::min(n, static_cast<std::size_t>((nd + 1.0) * p_));
  w[mode] = 1.0;
  for (std::size_t k = mode + 1; k <= n; ++k) {
    w[k] = w[k - 1] * static_cast<double>(n - k + 1) / static_cast<double>(k) * odds;
  }
  for (std::size_t k = mode; k-- > 0;) {
    w[k] = w[k + 1] * static_cast<double>(k + 1) / static_cast<double>(n - k) / odds;
  }
  cumulative_.resize(n + 1);
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) {
    total += w[k];
    cumulative_[k] = total;
  }
}

std::size_t BitwiseMutation::sample_flip_count(RandomStream& rng) const {
  if (p_ == 0.0) return 0;
  if (p_ == 1.0) return n_;
  const double u = rng.uniform01() * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min(n_, static_cast<std::size_t>(it - cumulative_.begin()));
}

void BitwiseMutation::flip_distinct(BitVector& v, std::size_t count, RandomStream& rng) const {
  // Floyd: a uniform count-subset of [0, n) from count draws.
  std::vector<std::size_t> chosen;
  chosen.reserve(count);
  for (std::size_t j = n_ - count; j < n_; ++j) {
    const auto t = static_cast<std::size_t>(rng.uniform_below(j + 1));
    const bool seen = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
    chosen.push_back(seen ? j : t);
  }
  for (std::size_t i : chosen) v.flip(i);
}

void BitwiseMutation::apply(BitVector& v, RandomStream& rng) const {
  if (v.size() != n_) {
    throw std::invalid_argument(
        fmt::format("mutation: length {} does not match n={}", v.size(), n_));
  }
  if (p_ == 0.0) return;
  if (p_ == 1.0) {
    v.flip_all();
    return;
  }
  const std::size_t count = sample_flip_count(rng);
  if (count == 0) return;
  if (2 * count <= n_) {
    flip_distinct(v, count, rng);
  } else {
    // Flip everything, then restore a uniform subset of n - count bits.
    v.flip_all();
    flip_distinct(v, n_ - count, rng);
  }
}

BitVector BitwiseMutation::operator()(const BitVector& v, RandomStream& rng) const {
  BitVector out(v);
  apply(out, rng);
  return out;
}

BitVector mutate(const BitVector& v, double chi, RandomStream& rng) {
  return BitwiseMutation(v.size(), chi)(v, rng);
}

}  // namespace coevo
