#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "onefifth/algorithms.hpp"
#include "onefifth/controllers.hpp"

namespace onefifth {

/// Per-(distance, λ) totals of fixed-λ runs: E counts evaluations spent while
/// the parent sat at distance d, I counts iterations that left d towards the
/// optimum. Evaluations outside [1, d_max], including each run's initial
/// evaluation, go to a per-λ overflow bucket.
class LandscapeAccumulator {
 public:
  LandscapeAccumulator(std::size_t lambda_min, std::size_t lambda_max, std::size_t d_max)
      : lambda_min_(lambda_min), lambda_max_(lambda_max), d_max_(d_max) {
    if (lambda_min < 1 || lambda_max < lambda_min) throw std::invalid_argument("LandscapeAccumulator: bad lambda range");
    if (d_max < 1) throw std::invalid_argument("LandscapeAccumulator: d_max must be positive");
    const std::size_t lambdas = lambda_max - lambda_min + 1;
    e_.assign(lambdas * d_max, 0);
    i_.assign(lambdas * d_max, 0);
    runs_.assign(lambdas, 0);
    overflow_.assign(lambdas, 0);
  }

  std::size_t lambda_min() const noexcept { return lambda_min_; }
  std::size_t lambda_max() const noexcept { return lambda_max_; }
  std::size_t d_max() const noexcept { return d_max_; }

  /// Registers a new run at `lambda` whose initialization cost `initial_evals`.
  void begin_run(std::size_t lambda, std::uint64_t initial_evals) {
    const std::size_t li = lambda_index(lambda);
    ++runs_[li];
    overflow_[li] += initial_evals;
  }

  void accumulate(std::size_t lambda, const IterationOutcome& event) {
    const std::size_t li = lambda_index(lambda);
    const std::size_t d = event.distance_before;
    if (d < 1 || d > d_max_) {
      overflow_[li] += event.evals_charged;
      return;
    }
    e_[cell(li, d)] += event.evals_charged;
    if (event.distance_after < d) ++i_[cell(li, d)];
  }

  /// Adds `other`, whose λ range must lie inside this one's, into this.
  void merge(const LandscapeAccumulator& other) {
    if (other.d_max_ != d_max_ || other.lambda_min_ < lambda_min_ || other.lambda_max_ > lambda_max_) {
      throw std::invalid_argument("LandscapeAccumulator::merge: shape mismatch");
    }
    const std::size_t offset = other.lambda_min_ - lambda_min_;
    for (std::size_t k = 0; k < other.e_.size(); ++k) {
      e_[offset * d_max_ + k] += other.e_[k];
      i_[offset * d_max_ + k] += other.i_[k];
    }
    for (std::size_t k = 0; k < other.runs_.size(); ++k) {
      runs_[offset + k] += other.runs_[k];
      overflow_[offset + k] += other.overflow_[k];
    }
  }

  std::uint64_t evaluations(std::size_t d, std::size_t lambda) const { return e_[checked_cell(d, lambda)]; }
  std::uint64_t improvements(std::size_t d, std::size_t lambda) const { return i_[checked_cell(d, lambda)]; }
  std::uint64_t runs(std::size_t lambda) const { return runs_[lambda_index(lambda)]; }
  std::uint64_t overflow(std::size_t lambda) const { return overflow_[lambda_index(lambda)]; }

  /// Restores raw totals (used when reading landscape.csv back).
  void set_cell(std::size_t d, std::size_t lambda, std::uint64_t e, std::uint64_t i) {
    const std::size_t k = checked_cell(d, lambda);
    e_[k] = e;
    i_[k] = i;
  }
  void set_runs(std::size_t lambda, std::uint64_t runs) { runs_[lambda_index(lambda)] = runs; }

  friend bool operator==(const LandscapeAccumulator&, const LandscapeAccumulator&) = default;

 private:
  std::size_t lambda_index(std::size_t lambda) const {
    if (lambda < lambda_min_ || lambda > lambda_max_) throw std::out_of_range("LandscapeAccumulator: lambda out of range");
    return lambda - lambda_min_;
  }
  std::size_t cell(std::size_t li, std::size_t d) const noexcept { return li * d_max_ + (d - 1); }
  std::size_t checked_cell(std::size_t d, std::size_t lambda) const {
    if (d < 1 || d > d_max_) throw std::out_of_range("LandscapeAccumulator: distance out of range");
    return cell(lambda_index(lambda), d);
  }

  std::size_t lambda_min_;
  std::size_t lambda_max_;
  std::size_t d_max_;
  std::vector<std::uint64_t> e_;
  std::vector<std::uint64_t> i_;
  std::vector<std::uint64_t> runs_;
  std::vector<std::uint64_t> overflow_;
};

/// Expected evaluations until improvement, E/I, undefined where I = 0.
class Surface {
 public:
  explicit Surface(const LandscapeAccumulator& acc)
      : lambda_min_(acc.lambda_min()), lambda_max_(acc.lambda_max()), d_max_(acc.d_max()) {
    values_.resize((lambda_max_ - lambda_min_ + 1) * d_max_);
    for (std::size_t lambda = lambda_min_; lambda <= lambda_max_; ++lambda) {
      for (std::size_t d = 1; d <= d_max_; ++d) {
        const auto i = acc.improvements(d, lambda);
        if (i > 0) values_[index(d, lambda)] = static_cast<double>(acc.evaluations(d, lambda)) / static_cast<double>(i);
      }
    }
  }

  std::size_t lambda_min() const noexcept { return lambda_min_; }
  std::size_t lambda_max() const noexcept { return lambda_max_; }
  std::size_t d_max() const noexcept { return d_max_; }

  std::optional<double> at(std::size_t d, std::size_t lambda) const {
    if (d < 1 || d > d_max_ || lambda < lambda_min_ || lambda > lambda_max_) throw std::out_of_range("Surface::at");
    return values_[index(d, lambda)];
  }

  /// Smallest λ attaining the row minimum, if the row has any defined entry.
  std::optional<std::size_t> argmin(std::size_t d) const {
    std::optional<std::size_t> best;
    double best_value = 0.0;
    for (std::size_t lambda = lambda_min_; lambda <= lambda_max_; ++lambda) {
      if (const auto v = at(d, lambda); v && (!best || *v < best_value)) {
        best = lambda;
        best_value = *v;
      }
    }
    return best;
  }

 private:
  std::size_t index(std::size_t d, std::size_t lambda) const noexcept {
    return (lambda - lambda_min_) * d_max_ + (d - 1);
  }

  std::size_t lambda_min_;
  std::size_t lambda_max_;
  std::size_t d_max_;
  std::vector<std::optional<double>> values_;
};

inline Surface surface(const LandscapeAccumulator& acc) { return Surface(acc); }

/// λ values whose E/I at distance d lies within `tolerance` of the row minimum.
inline std::vector<std::size_t> near_optimal_set(const Surface& s, std::size_t d, double tolerance = 0.02) {
  const auto best = s.argmin(d);
  if (!best) throw std::domain_error("near_optimal_set: no defined entry at distance " + std::to_string(d));
  const double limit = (1.0 + tolerance) * *s.at(d, *best);
  std::vector<std::size_t> out;
  for (std::size_t lambda = s.lambda_min(); lambda <= s.lambda_max(); ++lambda) {
    if (const auto v = s.at(d, lambda); v && *v <= limit) out.push_back(lambda);
  }
  return out;
}

/// Per-distance argmin of the surface. Distances without data are left out
/// and resolved by nearest-distance lookup.
inline LambdaSchedule extrapolate_schedule(const Surface& s) {
  LambdaSchedule schedule;
  for (std::size_t d = 1; d <= s.d_max(); ++d) {
    if (const auto best = s.argmin(d)) schedule.table[d] = static_cast<double>(*best);
  }
  if (schedule.table.empty()) throw std::domain_error("extrapolate_schedule: surface has no defined entries");
  return schedule;
}

// ---------------------------------------------------------------------------
// landscape.csv: problem,n,lambda,d,E,I,runs

inline void write_landscape_header(std::ostream& os) { os << "problem,n,lambda,d,E,I,runs\n"; }

inline void write_landscape_rows(std::ostream& os, std::string_view problem, std::size_t n,
                                 const LandscapeAccumulator& acc) {
  for (std::size_t lambda = acc.lambda_min(); lambda <= acc.lambda_max(); ++lambda) {
    for (std::size_t d = 1; d <= acc.d_max(); ++d) {
      os << problem << ',' << n << ',' << lambda << ',' << d << ',' << acc.evaluations(d, lambda) << ','
         << acc.improvements(d, lambda) << ',' << acc.runs(lambda) << '\n';
    }
  }
}

/// Reads back the rows of one (problem, n) block written by
/// write_landscape_rows. Overflow totals are not part of the file.
inline LandscapeAccumulator read_landscape_csv(std::istream& is, std::string_view problem, std::size_t n) {
  struct Row {
    std::size_t lambda, d;
    std::uint64_t e, i, runs;
  };
  std::vector<Row> rows;
  std::string line;
  if (!std::getline(is, line) || line != "problem,n,lambda,d,E,I,runs") {
    throw std::runtime_error("landscape csv: unexpected header");
  }
  std::size_t lmin = SIZE_MAX, lmax = 0, dmax = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string name, field;
    std::getline(ss, name, ',');
    std::vector<std::uint64_t> v;
    while (std::getline(ss, field, ',')) v.push_back(std::stoull(field));
    if (v.size() != 6) throw std::runtime_error("landscape csv: malformed row '" + line + "'");
    if (name != problem || v[0] != n) continue;
    rows.push_back({v[1], v[2], v[3], v[4], v[5]});
    lmin = std::min<std::size_t>(lmin, v[1]);
    lmax = std::max<std::size_t>(lmax, v[1]);
    dmax = std::max<std::size_t>(dmax, v[2]);
  }
  if (rows.empty()) throw std::runtime_error("landscape csv: no rows for the requested problem");
  LandscapeAccumulator acc(lmin, lmax, dmax);
  for (const auto& r : rows) {
    acc.set_cell(r.d, r.lambda, r.e, r.i);
    acc.set_runs(r.lambda, r.runs);
  }
  return acc;
}

}  // namespace onefifth
