#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "onefifth/bit_vector.hpp"
#include "onefifth/core.hpp"
#include "onefifth/rng.hpp"

namespace onefifth {

/// A pseudo-Boolean maximization problem with a known optimum and a planted
/// target, so that runs can be instrumented by distance to the optimum.
///
/// Besides full evaluation, a problem offers exact re-evaluation of x with a
/// set of positions inverted, backed by a per-run `Cache` built from the
/// current parent. `evaluate_flipped(cache, x, fx, flips)` returns exactly
/// `evaluate(x')` for x' = x with `flips` (distinct positions, ascending)
/// inverted, given `fx == evaluate(x)` and a cache in sync with x;
/// `commit(cache, x, flips)` is called before the parent x moves to x'. This is
/// purely a speed device: drivers still charge one evaluation per call.
template <class P>
concept Problem = requires(const P& p, const BitVector& x, Fitness f, std::span<const std::size_t> flips,
                           typename P::Cache& cache) {
  { p.size() } -> std::convertible_to<std::size_t>;
  { p.evaluate(x) } -> std::same_as<Fitness>;
  { p.make_cache(x) } -> std::same_as<typename P::Cache>;
  { p.evaluate_flipped(cache, x, f, flips) } -> std::same_as<Fitness>;
  p.commit(cache, x, flips);
  { p.optimum_value() } -> std::same_as<Fitness>;
  { p.target() } -> std::convertible_to<const BitVector&>;
};

namespace detail {
inline void check_length(std::size_t expected, const BitVector& x, const char* what) {
  if (x.size() != expected) throw std::invalid_argument(std::string(what) + ": length mismatch");
}
}  // namespace detail

class OneMaxInstance {
 public:
  explicit OneMaxInstance(BitVector target) : z_(std::move(target)) {
    if (z_.size() == 0) throw std::invalid_argument("OneMaxInstance: n must be positive");
  }

  std::size_t size() const noexcept { return z_.size(); }
  const BitVector& target() const noexcept { return z_; }
  Fitness optimum_value() const noexcept { return z_.size(); }

  Fitness evaluate(const BitVector& x) const {
    detail::check_length(size(), x, "OneMaxInstance::evaluate");
    return size() - hamming_distance(x, z_);
  }

  struct Cache {};
  Cache make_cache(const BitVector&) const noexcept { return {}; }
  void commit(Cache&, const BitVector&, std::span<const std::size_t>) const noexcept {}

  Fitness evaluate_flipped(Cache&, const BitVector& x, Fitness fx, std::span<const std::size_t> flips) const noexcept {
    for (std::size_t i : flips) {
      if (x[i] == z_[i]) {
        --fx;
      } else {
        ++fx;
      }
    }
    return fx;
  }

 private:
  BitVector z_;
};

/// Linear function with positive integer weights: sum of w_i over positions
/// where x agrees with the target.
class LinearInstance {
 public:
  LinearInstance(BitVector target, std::vector<std::uint32_t> weights) : z_(std::move(target)), w_(std::move(weights)) {
    if (z_.size() == 0) throw std::invalid_argument("LinearInstance: n must be positive");
    if (w_.size() != z_.size()) throw std::invalid_argument("LinearInstance: weight count differs from n");
    for (auto w : w_) {
      if (w == 0) throw std::invalid_argument("LinearInstance: weights must be positive");
      total_ += w;
    }
  }

  std::size_t size() const noexcept { return z_.size(); }
  const BitVector& target() const noexcept { return z_; }
  const std::vector<std::uint32_t>& weights() const noexcept { return w_; }
  Fitness optimum_value() const noexcept { return total_; }

  Fitness evaluate(const BitVector& x) const {
    detail::check_length(size(), x, "LinearInstance::evaluate");
    Fitness f = 0;
    const auto& xw = x.words();
    const auto& zw = z_.words();
    for (std::size_t k = 0; k < xw.size(); ++k) {
      BitVector::Word agree = ~(xw[k] ^ zw[k]);
      if (k + 1 == xw.size() && size() % BitVector::kWordBits != 0) {
        agree &= (BitVector::Word{1} << (size() % BitVector::kWordBits)) - 1;
      }
      while (agree != 0) {
        const int bit = std::countr_zero(agree);
        f += w_[k * BitVector::kWordBits + static_cast<std::size_t>(bit)];
        agree &= agree - 1;
      }
    }
    return f;
  }

  struct Cache {};
  Cache make_cache(const BitVector&) const noexcept { return {}; }
  void commit(Cache&, const BitVector&, std::span<const std::size_t>) const noexcept {}

  Fitness evaluate_flipped(Cache&, const BitVector& x, Fitness fx, std::span<const std::size_t> flips) const noexcept {
    for (std::size_t i : flips) {
      if (x[i] == z_[i]) {
        fx -= w_[i];
      } else {
        fx += w_[i];
      }
    }
    return fx;
  }

 private:
  BitVector z_;
  std::vector<std::uint32_t> w_;
  Fitness total_ = 0;
};

struct Literal {
  std::uint32_t var = 0;
  bool negated = false;

  bool satisfied_by(bool value) const noexcept { return value != negated; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

using Clause = std::array<Literal, 3>;

/// MAX-3SAT instance whose clauses are all satisfied by a planted assignment.
/// Fitness is the number of satisfied clauses; the optimum value is m.
class MaxSatInstance {
 public:
  MaxSatInstance(std::size_t n, std::vector<Clause> clauses, BitVector planted)
      : n_(n), clauses_(std::move(clauses)), x_star_(std::move(planted)) {
    if (n_ < 3) throw std::invalid_argument("MaxSatInstance: n must be at least 3");
    if (clauses_.size() >= (std::size_t{1} << 31)) throw std::invalid_argument("MaxSatInstance: too many clauses");
    detail::check_length(n_, x_star_, "MaxSatInstance");
    occ_offsets_.assign(n_ + 1, 0);
    for (const auto& c : clauses_) {
      for (const auto& lit : c) {
        if (lit.var >= n_) throw std::invalid_argument("MaxSatInstance: variable index out of range");
        ++occ_offsets_[lit.var + 1];
      }
      if (c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var) {
        throw std::invalid_argument("MaxSatInstance: clause variables must be distinct");
      }
    }
    for (std::size_t v = 0; v < n_; ++v) occ_offsets_[v + 1] += occ_offsets_[v];
    occurrences_.resize(occ_offsets_[n_]);
    std::vector<std::size_t> fill(occ_offsets_.begin(), occ_offsets_.end() - 1);
    for (std::uint32_t ci = 0; ci < clauses_.size(); ++ci) {
      for (const auto& lit : clauses_[ci]) occurrences_[fill[lit.var]++] = (ci << 1) | (lit.negated ? 1U : 0U);
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t clause_count() const noexcept { return clauses_.size(); }
  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const BitVector& target() const noexcept { return x_star_; }
  Fitness optimum_value() const noexcept { return clauses_.size(); }

  /// Occurrences of variable `v`, each packed as (clause index << 1) | negated.
  std::span<const std::uint32_t> packed_occurrences(std::size_t v) const noexcept {
    return {occurrences_.data() + occ_offsets_[v], occurrences_.data() + occ_offsets_[v + 1]};
  }

  static bool satisfied(const Clause& c, const BitVector& x) noexcept {
    return c[0].satisfied_by(x[c[0].var]) || c[1].satisfied_by(x[c[1].var]) || c[2].satisfied_by(x[c[2].var]);
  }

  Fitness evaluate(const BitVector& x) const {
    detail::check_length(n_, x, "MaxSatInstance::evaluate");
    Fitness f = 0;
    for (const auto& c : clauses_) f += satisfied(c, x) ? 1 : 0;
    return f;
  }

  /// Number of true literals per clause under the parent, plus scratch space
  /// for delta evaluation.
  struct Cache {
    std::vector<std::uint8_t> true_count;
    std::vector<std::int8_t> delta;
    std::vector<std::uint8_t> touched_flag;
    std::vector<std::uint32_t> touched;
  };

  Cache make_cache(const BitVector& x) const {
    detail::check_length(n_, x, "MaxSatInstance::make_cache");
    Cache cache;
    cache.true_count.resize(clauses_.size());
    for (std::size_t ci = 0; ci < clauses_.size(); ++ci) {
      const Clause& c = clauses_[ci];
      cache.true_count[ci] = static_cast<std::uint8_t>(c[0].satisfied_by(x[c[0].var]) + c[1].satisfied_by(x[c[1].var]) +
                                                       c[2].satisfied_by(x[c[2].var]));
    }
    cache.delta.assign(clauses_.size(), 0);
    cache.touched_flag.assign(clauses_.size(), 0);
    return cache;
  }

  void commit(Cache& cache, const BitVector& x, std::span<const std::size_t> flips) const {
    for (std::size_t v : flips) {
      const bool xv = x[v];
      for (std::uint32_t occ : packed_occurrences(v)) {
        const bool was_true = xv != static_cast<bool>(occ & 1U);
        auto& count = cache.true_count[occ >> 1];
        count = static_cast<std::uint8_t>(was_true ? count - 1 : count + 1);
      }
    }
  }

  Fitness evaluate_flipped(Cache& cache, const BitVector& x, Fitness fx, std::span<const std::size_t> flips) const {
    cache.touched.clear();
    for (std::size_t v : flips) {
      const bool xv = x[v];
      for (std::uint32_t occ : packed_occurrences(v)) {
        const std::uint32_t ci = occ >> 1;
        const bool was_true = xv != static_cast<bool>(occ & 1U);
        cache.delta[ci] = static_cast<std::int8_t>(cache.delta[ci] + (was_true ? -1 : 1));
        if (!cache.touched_flag[ci]) {
          cache.touched_flag[ci] = 1;
          cache.touched.push_back(ci);
        }
      }
    }
    std::int64_t change = 0;
    for (std::uint32_t ci : cache.touched) {
      const int before = cache.true_count[ci];
      const int after = before + cache.delta[ci];
      change += static_cast<int>(after > 0) - static_cast<int>(before > 0);
      cache.delta[ci] = 0;
      cache.touched_flag[ci] = 0;
    }
    return static_cast<Fitness>(static_cast<std::int64_t>(fx) + change);
  }

 private:
  std::size_t n_;
  std::vector<Clause> clauses_;
  BitVector x_star_;
  std::vector<std::size_t> occ_offsets_;
  std::vector<std::uint32_t> occurrences_;
};

// ---------------------------------------------------------------------------
// Generators

inline OneMaxInstance make_onemax(std::size_t n, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("make_onemax: n must be at least 1");
  return OneMaxInstance(BitVector::random(n, rng));
}

/// Random-weight linear function: weights uniform on [1..max_weight], target
/// uniform. max_weight = 1 is OneMax.
inline LinearInstance make_linint(std::size_t n, std::uint32_t max_weight, RngStream& rng) {
  if (n < 1) throw std::invalid_argument("make_linint: n must be at least 1");
  if (max_weight < 1) throw std::invalid_argument("make_linint: W must be at least 1");
  BitVector z = BitVector::random(n, rng);
  std::vector<std::uint32_t> w(n);
  for (auto& wi : w) wi = static_cast<std::uint32_t>(1 + rng.below(max_weight));
  return LinearInstance(std::move(z), std::move(w));
}

/// Default clause count ceil(4 n ln n).
inline std::size_t default_clause_count(std::size_t n, double density = 4.0) {
  return static_cast<std::size_t>(std::ceil(density * static_cast<double>(n) * std::log(static_cast<double>(n))));
}

/// Planted-solution random 3-CNF. Each clause is drawn uniformly among
/// clauses over 3 distinct variables with independent polarities, and
/// redrawn whenever the planted assignment falsifies all three literals.
inline MaxSatInstance make_maxsat_planted(std::size_t n, std::size_t m, RngStream& rng) {
  if (n < 3) throw std::invalid_argument("make_maxsat_planted: n must be at least 3");
  if (m < 1) throw std::invalid_argument("make_maxsat_planted: m must be at least 1");
  BitVector x_star = BitVector::random(n, rng);
  std::vector<Clause> clauses;
  clauses.reserve(m);
  while (clauses.size() < m) {
    Clause c;
    c[0].var = static_cast<std::uint32_t>(rng.below(n));
    do {
      c[1].var = static_cast<std::uint32_t>(rng.below(n));
    } while (c[1].var == c[0].var);
    do {
      c[2].var = static_cast<std::uint32_t>(rng.below(n));
    } while (c[2].var == c[0].var || c[2].var == c[1].var);
    for (auto& lit : c) lit.negated = rng.coin();
    if (MaxSatInstance::satisfied(c, x_star)) clauses.push_back(c);
  }
  return MaxSatInstance(n, std::move(clauses), std::move(x_star));
}

// ---------------------------------------------------------------------------
// Problem families used by the experiments

enum class ProblemKind { onemax, linint2, linint5, linintn, maxsat };

inline constexpr std::array<ProblemKind, 5> kAllProblems{ProblemKind::onemax, ProblemKind::linint2, ProblemKind::linint5,
                                                        ProblemKind::linintn, ProblemKind::maxsat};

constexpr std::string_view to_string(ProblemKind k) noexcept {
  switch (k) {
    case ProblemKind::onemax: return "onemax";
    case ProblemKind::linint2: return "linint2";
    case ProblemKind::linint5: return "linint5";
    case ProblemKind::linintn: return "linintn";
    case ProblemKind::maxsat: return "maxsat";
  }
  return "?";
}

inline std::optional<ProblemKind> parse_problem(std::string_view s) {
  for (auto k : kAllProblems) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

using ProblemInstance = std::variant<OneMaxInstance, LinearInstance, MaxSatInstance>;

inline ProblemInstance make_instance(ProblemKind kind, std::size_t n, RngStream& rng, double clause_density = 4.0) {
  switch (kind) {
    case ProblemKind::onemax: return make_onemax(n, rng);
    case ProblemKind::linint2: return make_linint(n, 2, rng);
    case ProblemKind::linint5: return make_linint(n, 5, rng);
    case ProblemKind::linintn: return make_linint(n, static_cast<std::uint32_t>(n), rng);
    case ProblemKind::maxsat: return make_maxsat_planted(n, default_clause_count(n, clause_density), rng);
  }
  throw std::invalid_argument("make_instance: unknown problem kind");
}

template <Problem P>
Fitness evaluate(const P& instance, const BitVector& x) {
  return instance.evaluate(x);
}

inline Fitness evaluate(const ProblemInstance& instance, const BitVector& x) {
  return std::visit([&](const auto& p) { return p.evaluate(x); }, instance);
}

template <Problem P>
std::size_t distance_to_optimum(const P& instance, const BitVector& x) {
  return hamming_distance(x, instance.target());
}

inline std::size_t distance_to_optimum(const ProblemInstance& instance, const BitVector& x) {
  return std::visit([&](const auto& p) { return hamming_distance(x, p.target()); }, instance);
}

inline std::size_t problem_size(const ProblemInstance& instance) {
  return std::visit([](const auto& p) { return p.size(); }, instance);
}

/// Debug dump: header `problem n m seed`, the target bit string, then one
/// weight or one clause (signed 1-based literals) per line.
inline void dump_instance(std::ostream& os, std::string_view problem, const ProblemInstance& instance,
                          std::uint64_t seed) {
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        std::size_t m = 0;
        if constexpr (std::is_same_v<T, MaxSatInstance>) m = p.clause_count();
        os << problem << ' ' << p.size() << ' ' << m << ' ' << seed << '\n';
        os << p.target().to_string() << '\n';
        if constexpr (std::is_same_v<T, LinearInstance>) {
          for (auto w : p.weights()) os << w << '\n';
        } else if constexpr (std::is_same_v<T, MaxSatInstance>) {
          for (const auto& c : p.clauses()) {
            for (std::size_t k = 0; k < c.size(); ++k) {
              if (k) os << ' ';
              os << (c[k].negated ? "-" : "") << (c[k].var + 1);
            }
            os << '\n';
          }
        }
      },
      instance);
}

}  // namespace onefifth
