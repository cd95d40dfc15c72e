#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

#include "onefifth/core.hpp"

namespace onefifth {

struct ControllerConfig {
  double update_strength = 1.5;  // F
  int success_ratio = 5;         // U, the 5 of the one-fifth rule
  double lambda_max = 1.0;
  double lambda_init = 1.0;

  void validate() const {
    if (!(update_strength > 1.0 && update_strength < 2.0)) {
      throw std::invalid_argument("ControllerConfig: update strength must lie in (1, 2)");
    }
    if (success_ratio < 2) throw std::invalid_argument("ControllerConfig: success ratio must be at least 2");
    if (!(lambda_max >= 1.0)) throw std::invalid_argument("ControllerConfig: lambda_max must be at least 1");
    if (!(lambda_init >= 1.0 && lambda_init <= lambda_max)) {
      throw std::invalid_argument("ControllerConfig: lambda_init must lie in [1, lambda_max]");
    }
  }

  /// Growth exponent per failure, 1/(U-1).
  double failure_exponent() const noexcept { return 1.0 / static_cast<double>(success_ratio - 1); }
};

/// Cap 2·log_base(n), never below 1.
inline double log_cap(std::size_t n, double base = 2.718281828459045) {
  return std::max(1.0, 2.0 * std::log(static_cast<double>(n)) / std::log(base));
}

// ---------------------------------------------------------------------------
// Classic one-fifth rule

struct OneFifthState {
  double lambda = 1.0;
  friend bool operator==(const OneFifthState&, const OneFifthState&) = default;
};

inline OneFifthState onefifth_update(OneFifthState s, const ControllerConfig& cfg, Outcome outcome) {
  if (outcome == Outcome::improved) {
    s.lambda = std::max(s.lambda / cfg.update_strength, 1.0);
  } else {
    s.lambda = std::min(s.lambda * std::pow(cfg.update_strength, cfg.failure_exponent()), cfg.lambda_max);
  }
  return s;
}

// ---------------------------------------------------------------------------
// One-fifth rule with rollbacks: failures grow λ from the last successful
// value λ0 only within a span; a span that is used up resets λ to λ0 and the
// next span is one iteration longer.

inline constexpr std::uint64_t kInitialSpan = 10;

struct RollbackState {
  double lambda = 1.0;
  double base = 1.0;              // λ0
  std::uint64_t bad_in_row = 0;   // B
  std::uint64_t span = kInitialSpan;  // Δ

  static RollbackState fresh(const ControllerConfig& cfg) noexcept {
    return {cfg.lambda_init, cfg.lambda_init, 0, kInitialSpan};
  }

  friend bool operator==(const RollbackState&, const RollbackState&) = default;
};

inline RollbackState rollback_update(RollbackState s, const ControllerConfig& cfg, Outcome outcome) {
  if (outcome == Outcome::improved) {
    s.lambda = std::max(s.lambda / cfg.update_strength, 1.0);
    s.base = s.lambda;
    s.bad_in_row = 0;
    s.span = kInitialSpan;
    return s;
  }
  if (++s.bad_in_row == s.span) {
    s.bad_in_row = 0;
    ++s.span;
  }
  s.lambda = std::min(s.base * std::pow(cfg.update_strength, static_cast<double>(s.bad_in_row) * cfg.failure_exponent()),
                      cfg.lambda_max);
  return s;
}

namespace detail {
template <class State, class Update>
std::uint64_t failures_until(double lambda_target, const ControllerConfig& cfg, State s, Update update) {
  cfg.validate();
  if (!(lambda_target >= cfg.lambda_init && lambda_target <= cfg.lambda_max)) {
    throw std::invalid_argument("failure_iterations_to_reach: target outside [lambda_init, lambda_max]");
  }
  const double threshold = lambda_target * (1.0 - 1e-12);
  std::uint64_t t = 0;
  // Rollback needs about k^2/2 failures for k one-fifth steps; the step count
  // to reach lambda_max is bounded, so this terminates.
  while (s.lambda < threshold) {
    s = update(s, cfg, Outcome::worse);
    ++t;
  }
  return t;
}
}  // namespace detail

/// Consecutive failures after which the rollback controller, started fresh,
/// first reaches λ ≥ lambda_target.
inline std::uint64_t failure_iterations_to_reach(double lambda_target, const ControllerConfig& cfg) {
  return detail::failures_until(lambda_target, cfg, RollbackState::fresh(cfg), rollback_update);
}

/// Same count for the classic one-fifth rule.
inline std::uint64_t onefifth_failures_to_reach(double lambda_target, const ControllerConfig& cfg) {
  return detail::failures_until(lambda_target, cfg, OneFifthState{cfg.lambda_init}, onefifth_update);
}

// ---------------------------------------------------------------------------
// Distance-indexed schedule

struct LambdaSchedule {
  std::map<std::size_t, double> table;  // distance -> λ
};

/// λ at distance d: the exact entry if present, otherwise the nearest
/// present distance, ties toward the smaller one.
inline double schedule_lookup(const LambdaSchedule& schedule, std::size_t d) {
  const auto& t = schedule.table;
  if (t.empty()) throw std::invalid_argument("schedule_lookup: empty schedule");
  auto hi = t.lower_bound(d);
  if (hi == t.end()) return std::prev(hi)->second;
  if (hi->first == d || hi == t.begin()) return hi->second;
  auto lo = std::prev(hi);
  return (d - lo->first <= hi->first - d) ? lo->second : hi->second;
}

inline void write_schedule_csv(std::ostream& os, const LambdaSchedule& schedule) {
  os << "d,lambda\n";
  for (const auto& [d, lambda] : schedule.table) os << d << ',' << lambda << '\n';
}

inline LambdaSchedule read_schedule_csv(std::istream& is) {
  LambdaSchedule s;
  std::string line;
  if (!std::getline(is, line) || line != "d,lambda") throw std::runtime_error("schedule csv: expected header 'd,lambda'");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("schedule csv: malformed row '" + line + "'");
    std::size_t d = 0;
    double lambda = 0.0;
    try {
      d = std::stoull(line.substr(0, comma));
      lambda = std::stod(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("schedule csv: malformed row '" + line + "'");
    }
    if (!(lambda >= 1.0)) throw std::runtime_error("schedule csv: lambda must be at least 1");
    s.table[d] = lambda;
  }
  if (s.table.empty()) throw std::runtime_error("schedule csv: no rows");
  return s;
}

inline LambdaSchedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file " + path);
  return read_schedule_csv(in);
}

// ---------------------------------------------------------------------------
// Run-time controller used by the GA driver

struct FixedLambda {
  double lambda = 1.0;
};
struct OneFifthControl {
  ControllerConfig cfg;
};
struct RollbackControl {
  ControllerConfig cfg;
};
struct ScheduleControl {
  std::shared_ptr<const LambdaSchedule> schedule;
};

using ControllerSpec = std::variant<FixedLambda, OneFifthControl, RollbackControl, ScheduleControl>;

/// Owns the λ state of one run.
class LambdaController {
 public:
  explicit LambdaController(const ControllerSpec& spec) : spec_(spec) {
    std::visit(
        [this](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, FixedLambda>) {
            if (!(s.lambda >= 1.0)) throw std::invalid_argument("fixed lambda must be at least 1");
            lambda_ = s.lambda;
          } else if constexpr (std::is_same_v<T, OneFifthControl>) {
            s.cfg.validate();
            lambda_ = s.cfg.lambda_init;
          } else if constexpr (std::is_same_v<T, RollbackControl>) {
            s.cfg.validate();
            rollback_ = RollbackState::fresh(s.cfg);
            lambda_ = rollback_.lambda;
          } else {
            if (!s.schedule || s.schedule->table.empty()) throw std::invalid_argument("schedule controller needs a schedule");
            lambda_ = s.schedule->table.begin()->second;
          }
        },
        spec_);
  }

  /// λ for the iteration about to start, with the parent at distance d.
  double begin_iteration(std::size_t distance) {
    if (const auto* s = std::get_if<ScheduleControl>(&spec_)) lambda_ = schedule_lookup(*s->schedule, distance);
    return lambda_;
  }

  bool needs_distance() const noexcept { return std::holds_alternative<ScheduleControl>(spec_); }

  void end_iteration(Outcome outcome) {
    if (const auto* s = std::get_if<OneFifthControl>(&spec_)) {
      lambda_ = onefifth_update(OneFifthState{lambda_}, s->cfg, outcome).lambda;
    } else if (const auto* r = std::get_if<RollbackControl>(&spec_)) {
      rollback_ = rollback_update(rollback_, r->cfg, outcome);
      lambda_ = rollback_.lambda;
    }
  }

  double lambda() const noexcept { return lambda_; }

 private:
  ControllerSpec spec_;
  double lambda_ = 1.0;
  RollbackState rollback_{};
};

/// Integer population size for a real λ, rounding halves up.
inline std::size_t population_size(double lambda) {
  return static_cast<std::size_t>(std::floor(lambda + 0.5));
}

}  // namespace onefifth
