#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace onefifth {

namespace detail {
__extension__ using uint128 = unsigned __int128;
}  // namespace detail

/// SplitMix64 finalizer. Used for seeding and for substream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of the `index`-th substream of `master`. Stateless: the result depends
/// only on the two arguments.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (mix64(index + 0x632be59bd9b4e019ULL) | 1ULL));
}

/// Pinned generator: xoshiro256** 1.0, state filled from the seed by four
/// SplitMix64 steps. All derived samplers (bounded integers, reals, binomial
/// counts, geometric skips) are implemented here so that sequences do not
/// depend on the standard library's distribution implementations.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed) noexcept : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      word = mix64(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  std::uint64_t seed() const noexcept { return seed_; }

  result_type operator()() noexcept {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("RngStream::below: bound must be positive");
    detail::uint128 m = static_cast<detail::uint128>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<detail::uint128>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  bool coin() noexcept { return ((*this)() >> 63) != 0; }

  /// Number of failures before the first success of a Bernoulli(p) sequence,
  /// given log1m_p = log(1 - p). Requires 0 < p < 1.
  std::uint64_t geometric_skip(double log1m_p) noexcept {
    const double u = 1.0 - uniform01();  // (0, 1]
    const double k = std::floor(std::log(u) / log1m_p);
    if (!(k < 9.0e18)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(k);
  }

  /// Binomial(n, p) by geometric skipping over successes (or failures when
  /// p > 1/2). Expected cost O(1 + n·min(p, 1-p)).
  std::uint64_t binomial(std::uint64_t n, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("RngStream::binomial: p outside [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    const bool flip = p > 0.5;
    const double q = flip ? 1.0 - p : p;
    const double log1m_q = std::log1p(-q);
    std::uint64_t count = 0;
    std::uint64_t pos = 0;
    for (;;) {
      const std::uint64_t skip = geometric_skip(log1m_q);
      if (skip >= n - pos) break;
      pos += skip + 1;
      ++count;
      if (pos >= n) break;
    }
    return flip ? n - count : count;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_[4]{};
};

/// Independent stream for one run of an experiment.
inline RngStream derive_run_rng(std::uint64_t master_seed, std::uint64_t run_index) {
  return RngStream(derive_seed(master_seed, run_index));
}

}  // namespace onefifth
