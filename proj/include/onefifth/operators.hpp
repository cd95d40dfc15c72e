#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <cstdint>
#include <vector>

#include "onefifth/bit_vector.hpp"
#include "onefifth/rng.hpp"

namespace onefifth {

namespace detail {
inline void check_probability(double p, const char* what) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + ": probability outside (0, 1]");
}
}  // namespace detail

/// Positions of [0, n) selected independently with probability p, ascending.
/// Geometric skipping, so expected cost is O(1 + n·p).
inline std::vector<std::size_t> sample_bernoulli_positions(std::size_t n, double p, RngStream& rng) {
  std::vector<std::size_t> out;
  if (p >= 1.0) {
    out.resize(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  const double log1m_p = std::log1p(-p);
  std::size_t pos = 0;
  for (;;) {
    const std::uint64_t skip = rng.geometric_skip(log1m_p);
    if (skip >= n - pos) break;
    pos += static_cast<std::size_t>(skip);
    out.push_back(pos);
    if (++pos >= n) break;
  }
  return out;
}

namespace detail {
/// Floyd's algorithm; `mark` is an all-zero scratch bitmap of size ≥ n for
/// large k and is left marked on return (callers clear it).
inline void floyd_subset(std::size_t n, std::size_t k, RngStream& rng, std::vector<std::size_t>& out,
                         std::vector<std::uint8_t>& mark) {
  out.clear();
  out.reserve(k);
  if (k <= 32) {
    for (std::size_t j = n - k; j < n; ++j) {
      const auto t = static_cast<std::size_t>(rng.below(j + 1));
      out.push_back(std::find(out.begin(), out.end(), t) == out.end() ? t : j);
    }
    return;
  }
  if (mark.size() < n) mark.resize(n, 0);
  for (std::size_t j = n - k; j < n; ++j) {
    const auto t = static_cast<std::size_t>(rng.below(j + 1));
    const std::size_t pick = mark[t] ? j : t;
    mark[pick] = 1;
    out.push_back(pick);
  }
}

inline std::vector<std::uint8_t>& subset_scratch() {
  thread_local std::vector<std::uint8_t> mark;
  return mark;
}
}  // namespace detail

/// Uniform k-subset of [0, n) by Floyd's algorithm, in insertion order.
inline std::vector<std::size_t> sample_subset(std::size_t n, std::size_t k, RngStream& rng) {
  if (k > n) throw std::invalid_argument("sample_subset: k > n");
  std::vector<std::size_t> out;
  auto& mark = detail::subset_scratch();
  detail::floyd_subset(n, k, rng, out, mark);
  if (k > 32) {
    for (std::size_t i : out) mark[i] = 0;
  }
  return out;
}

/// The same subset as `sample_subset` (identical random draws), ascending.
/// Large subsets are read off the scratch bitmap instead of being sorted.
inline void sample_subset_sorted(std::size_t n, std::size_t k, RngStream& rng, std::vector<std::size_t>& out) {
  if (k > n) throw std::invalid_argument("sample_subset_sorted: k > n");
  auto& mark = detail::subset_scratch();
  detail::floyd_subset(n, k, rng, out, mark);
  if (k <= 32) {
    std::sort(out.begin(), out.end());
    return;
  }
  if (k * 8 < n) {
    for (std::size_t i : out) mark[i] = 0;
    std::sort(out.begin(), out.end());
    return;
  }
  out.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (mark[i]) {
      out.push_back(i);
      mark[i] = 0;
    }
  }
}

/// ℓ ~ Binomial(n, p) conditioned on ℓ ≥ 1 (redrawn while zero).
inline std::size_t sample_mutation_strength(std::size_t n, double p, RngStream& rng) {
  detail::check_probability(p, "sample_mutation_strength");
  if (n < 1) throw std::invalid_argument("sample_mutation_strength: n must be positive");
  for (;;) {
    if (const auto ell = rng.binomial(n, p); ell > 0) return static_cast<std::size_t>(ell);
  }
}

/// Flips exactly `ell` distinct uniformly chosen positions of `x`.
inline BitVector mutate(const BitVector& x, std::size_t ell, RngStream& rng) {
  if (ell < 1 || ell > x.size()) throw std::invalid_argument("mutate: ell outside [1, n]");
  BitVector y(x);
  for (std::size_t i : sample_subset(x.size(), ell, rng)) y.flip(i);
  return y;
}

/// Positions where a crossover offspring copies the second parent.
/// Never empty.
struct CrossoverMask {
  std::vector<std::size_t> take_from_prime;  // ascending
  std::size_t n = 0;

  bool all_from_prime() const noexcept { return take_from_prime.size() == n; }
};

/// Each position taken independently with probability c; the whole mask is
/// redrawn while empty.
inline CrossoverMask sample_crossover_mask(std::size_t n, double c, RngStream& rng) {
  detail::check_probability(c, "sample_crossover_mask");
  if (n < 1) throw std::invalid_argument("sample_crossover_mask: n must be positive");
  CrossoverMask mask{{}, n};
  do {
    mask.take_from_prime = sample_bernoulli_positions(n, c, rng);
  } while (mask.take_from_prime.empty());
  return mask;
}

inline BitVector apply_crossover(const BitVector& x, const BitVector& x_prime, const CrossoverMask& mask) {
  if (x.size() != x_prime.size() || mask.n != x.size()) throw std::invalid_argument("apply_crossover: length mismatch");
  BitVector y(x);
  for (std::size_t i : mask.take_from_prime) y.set(i, x_prime[i]);
  return y;
}

/// Flip positions of a standard bit mutation at `rate` conditioned on at
/// least one flip, ascending.
inline std::vector<std::size_t> sample_nonzero_flips(std::size_t n, double rate, RngStream& rng) {
  detail::check_probability(rate, "standard_bit_mutation_nonzero");
  std::vector<std::size_t> flips;
  do {
    flips = sample_bernoulli_positions(n, rate, rng);
  } while (flips.empty());
  return flips;
}

inline BitVector standard_bit_mutation_nonzero(const BitVector& x, double rate, RngStream& rng) {
  BitVector y(x);
  for (std::size_t i : sample_nonzero_flips(x.size(), rate, rng)) y.flip(i);
  return y;
}

}  // namespace onefifth
