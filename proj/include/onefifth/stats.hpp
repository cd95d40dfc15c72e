#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace onefifth {

inline double mean(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("mean: empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

/// Sample standard deviation (divisor size-1); 0 for a single observation.
inline double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

/// One-sided Mann-Whitney U test of "values in `a` tend to be smaller than
/// values in `b`". Normal approximation with tie and continuity correction;
/// returns the p-value.
inline double mann_whitney_less(std::span<const double> a, std::span<const double> b) {
  const std::size_t na = a.size(), nb = b.size();
  if (na == 0 || nb == 0) throw std::invalid_argument("mann_whitney_less: empty sample");
  struct Obs {
    double v;
    bool from_a;
  };
  std::vector<Obs> all;
  all.reserve(na + nb);
  for (double v : a) all.push_back({v, true});
  for (double v : b) all.push_back({v, false});
  std::sort(all.begin(), all.end(), [](const Obs& x, const Obs& y) { return x.v < y.v; });

  const double total = static_cast<double>(na + nb);
  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].from_a) rank_sum_a += avg_rank;
    }
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  const double dna = static_cast<double>(na), dnb = static_cast<double>(nb);
  const double u_a = rank_sum_a - dna * (dna + 1.0) / 2.0;
  const double mu = dna * dnb / 2.0;
  const double sigma = std::sqrt(dna * dnb / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0))));
  if (sigma == 0.0) return 0.5;
  const double z = (u_a - mu + 0.5) / sigma;
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

}  // namespace onefifth
