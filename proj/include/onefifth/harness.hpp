#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "onefifth/algorithms.hpp"
#include "onefifth/controllers.hpp"
#include "onefifth/landscape.hpp"
#include "onefifth/problems.hpp"
#include "onefifth/rng.hpp"
#include "onefifth/stats.hpp"

namespace onefifth {

/// Invalid experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Algorithm { ollga_n, ollga_logn, ollga_n_mod, ollga_logn_mod, opo_ea, rls, ollga_extra, ollga, ollga_mod };

inline constexpr std::array<Algorithm, 9> kAllAlgorithms{
    Algorithm::ollga_n, Algorithm::ollga_logn, Algorithm::ollga_n_mod, Algorithm::ollga_logn_mod, Algorithm::opo_ea,
    Algorithm::rls,     Algorithm::ollga_extra, Algorithm::ollga,      Algorithm::ollga_mod};

constexpr std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::ollga_n: return "ollga-n";
    case Algorithm::ollga_logn: return "ollga-logn";
    case Algorithm::ollga_n_mod: return "ollga-n-mod";
    case Algorithm::ollga_logn_mod: return "ollga-logn-mod";
    case Algorithm::opo_ea: return "opo-ea";
    case Algorithm::rls: return "rls";
    case Algorithm::ollga_extra: return "ollga-extra";
    case Algorithm::ollga: return "ollga";
    case Algorithm::ollga_mod: return "ollga-mod";
  }
  return "?";
}

inline std::optional<Algorithm> parse_algorithm(std::string_view s) {
  for (auto a : kAllAlgorithms) {
    if (to_string(a) == s) return a;
  }
  return std::nullopt;
}

enum class Pipeline { runtimes, landscape, extrapolated };

constexpr std::string_view to_string(Pipeline p) noexcept {
  switch (p) {
    case Pipeline::runtimes: return "runtimes";
    case Pipeline::landscape: return "landscape";
    case Pipeline::extrapolated: return "extrapolated";
  }
  return "?";
}

inline std::optional<Pipeline> parse_pipeline(std::string_view s) {
  for (auto p : {Pipeline::runtimes, Pipeline::landscape, Pipeline::extrapolated}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

/// Cap used by the generic `ollga` and `ollga-mod` algorithm names.
enum class CapPolicy { n, two_ln };

struct ExperimentConfig {
  Pipeline pipeline = Pipeline::runtimes;
  std::vector<ProblemKind> problems{kAllProblems.begin(), kAllProblems.end()};
  std::vector<std::size_t> sizes{100, 200, 400, 800, 1600, 3200, 6400, 12800};
  std::size_t runs = 100;
  std::uint64_t master_seed = 1;
  std::vector<Algorithm> algorithms{Algorithm::ollga_n,        Algorithm::ollga_logn, Algorithm::ollga_n_mod,
                                    Algorithm::ollga_logn_mod, Algorithm::opo_ea,     Algorithm::rls};
  CapPolicy cap = CapPolicy::n;
  double cap_log_base = 2.718281828459045;
  double update_strength = 1.5;
  std::uint64_t budget_multiplier = 10'000;
  std::size_t threads = 1;
  double clause_density = 4.0;
  std::string out_dir = ".";

  /// Schedules for `ollga-extra`: a CSV file used for every cell, or a
  /// directory holding schedule_<problem>.csv files.
  std::optional<std::string> schedule_path;
  /// Schedules resolved in memory, keyed by (problem, n); take precedence.
  std::map<std::pair<ProblemKind, std::size_t>, std::shared_ptr<const LambdaSchedule>> schedules;

  // Landscape protocol.
  std::size_t landscape_runs = 1000;
  std::size_t profile_lambda_max = 50;
  std::optional<std::size_t> d_max;  // n/2 when unset

  void validate() const {
    if (runs < 1) throw ConfigError("runs must be at least 1");
    if (sizes.empty()) throw ConfigError("at least one problem size is required");
    if (problems.empty()) throw ConfigError("at least one problem is required");
    for (auto n : sizes) {
      if (n < 1) throw ConfigError("problem sizes must be positive");
      if (n < 3 && std::find(problems.begin(), problems.end(), ProblemKind::maxsat) != problems.end()) {
        throw ConfigError("maxsat needs n >= 3");
      }
    }
    if (pipeline != Pipeline::landscape && algorithms.empty()) throw ConfigError("at least one algorithm is required");
    if (!(update_strength > 1.0 && update_strength < 2.0)) throw ConfigError("update strength must lie in (1, 2)");
    if (budget_multiplier < 1) throw ConfigError("budget multiplier must be positive");
    if (landscape_runs < 1) throw ConfigError("landscape runs must be at least 1");
    if (profile_lambda_max < 1) throw ConfigError("profile lambda range must be non-empty");
    if (d_max && *d_max < 1) throw ConfigError("d_max must be positive");
    if (!(cap_log_base > 1.0)) throw ConfigError("cap log base must exceed 1");
    if (!(clause_density > 0.0)) throw ConfigError("clause density must be positive");
  }

  std::size_t d_max_for(std::size_t n) const { return d_max.value_or(std::max<std::size_t>(1, n / 2)); }
};

struct RunRow {
  ProblemKind problem{};
  std::size_t n = 0;
  Algorithm algorithm{};
  std::size_t run = 0;
  RunRecord record;
};

struct SummaryRow {
  ProblemKind problem{};
  std::size_t n = 0;
  Algorithm algorithm{};
  double mean_evaluations = 0.0;
  double stddev_evaluations = 0.0;
  std::size_t runs = 0;
};

struct MatrixResult {
  std::vector<RunRow> runs;
  std::vector<SummaryRow> summary;

  bool budget_exhausted() const {
    return std::any_of(runs.begin(), runs.end(), [](const RunRow& r) { return !r.record.reached_optimum; });
  }

  /// Evaluation counts of one cell in run order.
  std::vector<double> evaluations(ProblemKind problem, std::size_t n, Algorithm algorithm) const {
    std::vector<double> out;
    for (const auto& r : runs) {
      if (r.problem == problem && r.n == n && r.algorithm == algorithm) out.push_back(static_cast<double>(r.record.evaluations));
    }
    return out;
  }

  const SummaryRow* find(ProblemKind problem, std::size_t n, Algorithm algorithm) const {
    for (const auto& s : summary) {
      if (s.problem == problem && s.n == n && s.algorithm == algorithm) return &s;
    }
    return nullptr;
  }
};

// ---------------------------------------------------------------------------
// Execution helpers

/// Runs fn(0..count-1) on `threads` workers. Results must be written to
/// per-index slots; the first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

inline std::size_t problem_index(ProblemKind k) {
  return static_cast<std::size_t>(std::find(kAllProblems.begin(), kAllProblems.end(), k) - kAllProblems.begin());
}

/// Seed of run `run` of the (problem, n) cell in a pipeline identified by `tag`.
/// Algorithms in the same cell share run seeds, hence instances and start points.
inline std::uint64_t cell_run_seed(std::uint64_t master, std::uint64_t tag, ProblemKind problem, std::size_t n,
                                   std::uint64_t run) {
  return derive_seed(derive_seed(derive_seed(derive_seed(master, tag), problem_index(problem)), n), run);
}

inline constexpr std::uint64_t kRuntimeTag = 0x52554e53;    // "RUNS"
inline constexpr std::uint64_t kLandscapeTag = 0x4c414e44;  // "LAND"

inline ProblemInstance instance_for_run(ProblemKind problem, std::size_t n, std::uint64_t run_seed, double density) {
  RngStream rng(derive_seed(run_seed, 0));
  return make_instance(problem, n, rng, density);
}

inline RngStream algorithm_rng(std::uint64_t run_seed) { return RngStream(derive_seed(run_seed, 1)); }

inline std::shared_ptr<const LambdaSchedule> resolve_schedule(const ExperimentConfig& cfg, ProblemKind problem,
                                                              std::size_t n) {
  if (auto it = cfg.schedules.find({problem, n}); it != cfg.schedules.end()) return it->second;
  if (!cfg.schedule_path) {
    throw ConfigError("ollga-extra needs a schedule (--schedule) for problem " + std::string(to_string(problem)));
  }
  std::filesystem::path path(*cfg.schedule_path);
  if (std::filesystem::is_directory(path)) {
    const auto sized = path / ("schedule_" + std::string(to_string(problem)) + "_" + std::to_string(n) + ".csv");
    path = std::filesystem::exists(sized) ? sized : path / ("schedule_" + std::string(to_string(problem)) + ".csv");
  }
  if (!std::filesystem::exists(path)) throw ConfigError("schedule file not found: " + path.string());
  try {
    return std::make_shared<const LambdaSchedule>(load_schedule(path.string()));
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

inline ControllerSpec controller_for(Algorithm a, const ExperimentConfig& cfg, std::size_t n,
                                     std::shared_ptr<const LambdaSchedule> schedule) {
  ControllerConfig cc;
  cc.update_strength = cfg.update_strength;
  const double cap_n = static_cast<double>(n);
  const double cap_log = log_cap(n, cfg.cap_log_base);
  const double generic_cap = cfg.cap == CapPolicy::n ? cap_n : cap_log;
  switch (a) {
    case Algorithm::ollga_n: cc.lambda_max = cap_n; return OneFifthControl{cc};
    case Algorithm::ollga_logn: cc.lambda_max = cap_log; return OneFifthControl{cc};
    case Algorithm::ollga_n_mod: cc.lambda_max = cap_n; return RollbackControl{cc};
    case Algorithm::ollga_logn_mod: cc.lambda_max = cap_log; return RollbackControl{cc};
    case Algorithm::ollga: cc.lambda_max = generic_cap; return OneFifthControl{cc};
    case Algorithm::ollga_mod: cc.lambda_max = generic_cap; return RollbackControl{cc};
    case Algorithm::ollga_extra: return ScheduleControl{std::move(schedule)};
    case Algorithm::opo_ea:
    case Algorithm::rls: break;
  }
  throw std::logic_error("controller_for: not a GA variant");
}

template <Problem P>
RunRecord run_algorithm(Algorithm a, const P& instance, const ExperimentConfig& cfg, RngStream& rng,
                        std::shared_ptr<const LambdaSchedule> schedule) {
  RunOptions opts;
  opts.budget = default_budget(instance.size(), cfg.budget_multiplier);
  switch (a) {
    case Algorithm::rls: return run_rls(instance, rng, opts);
    case Algorithm::opo_ea: return run_opo_ea(instance, rng, opts);
    default: return run_ollga(instance, controller_for(a, cfg, instance.size(), std::move(schedule)), rng, opts);
  }
}

inline std::vector<SummaryRow> summarize(const std::vector<RunRow>& rows) {
  std::map<std::tuple<std::string_view, std::size_t, std::string_view>, std::pair<SummaryRow, std::vector<double>>> cells;
  for (const auto& r : rows) {
    auto& [row, values] = cells[{to_string(r.problem), r.n, to_string(r.algorithm)}];
    row.problem = r.problem;
    row.n = r.n;
    row.algorithm = r.algorithm;
    values.push_back(static_cast<double>(r.record.evaluations));
  }
  std::vector<SummaryRow> out;
  for (auto& [key, cell] : cells) {
    auto& [row, values] = cell;
    row.mean_evaluations = mean(values);
    row.stddev_evaluations = sample_stddev(values);
    row.runs = values.size();
    out.push_back(row);
  }
  return out;
}

/// Output order: (problem, n, algorithm, run), names compared as strings.
inline void sort_rows(std::vector<RunRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const RunRow& a, const RunRow& b) {
    return std::tuple(to_string(a.problem), a.n, to_string(a.algorithm), a.run) <
           std::tuple(to_string(b.problem), b.n, to_string(b.algorithm), b.run);
  });
}

/// Executes every (problem, n, algorithm, run) cell. One instance is drawn per
/// (problem, n, run) and shared by all algorithms of that run.
inline MatrixResult run_matrix(const ExperimentConfig& cfg) {
  cfg.validate();
  std::map<std::pair<ProblemKind, std::size_t>, std::shared_ptr<const LambdaSchedule>> schedules;
  if (std::find(cfg.algorithms.begin(), cfg.algorithms.end(), Algorithm::ollga_extra) != cfg.algorithms.end()) {
    for (auto p : cfg.problems) {
      for (auto n : cfg.sizes) schedules[{p, n}] = resolve_schedule(cfg, p, n);
    }
  }

  struct Task {
    ProblemKind problem;
    std::size_t n;
    std::size_t run;
  };
  std::vector<Task> tasks;
  for (auto p : cfg.problems) {
    for (auto n : cfg.sizes) {
      for (std::size_t r = 0; r < cfg.runs; ++r) tasks.push_back({p, n, r});
    }
  }
  const std::size_t per_task = cfg.algorithms.size();
  std::vector<RunRow> rows(tasks.size() * per_task);
  parallel_for(tasks.size(), cfg.threads, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    const std::uint64_t seed = cell_run_seed(cfg.master_seed, kRuntimeTag, t.problem, t.n, t.run);
    const ProblemInstance instance = instance_for_run(t.problem, t.n, seed, cfg.clause_density);
    for (std::size_t ai = 0; ai < per_task; ++ai) {
      const Algorithm a = cfg.algorithms[ai];
      std::shared_ptr<const LambdaSchedule> schedule;
      if (a == Algorithm::ollga_extra) schedule = schedules.at({t.problem, t.n});
      RngStream rng = algorithm_rng(seed);
      RunRecord rec = std::visit([&](const auto& p) { return run_algorithm(a, p, cfg, rng, schedule); }, instance);
      rec.seed = seed;
      rows[ti * per_task + ai] = {t.problem, t.n, a, t.run, rec};
    }
  });
  sort_rows(rows);
  MatrixResult result;
  result.summary = summarize(rows);
  result.runs = std::move(rows);
  return result;
}

/// Per-(problem, algorithm) series of (n, mean/n).
inline std::map<std::pair<ProblemKind, Algorithm>, std::vector<std::pair<std::size_t, double>>> normalized_series(
    const std::vector<SummaryRow>& rows) {
  std::map<std::pair<ProblemKind, Algorithm>, std::vector<std::pair<std::size_t, double>>> out;
  for (const auto& r : rows) {
    out[{r.problem, r.algorithm}].emplace_back(r.n, r.mean_evaluations / static_cast<double>(r.n));
  }
  for (auto& [key, series] : out) std::sort(series.begin(), series.end());
  return out;
}

// ---------------------------------------------------------------------------
// Landscape protocol: fixed-λ GA runs for every integer λ in [1, lambda_max].

struct LandscapeRun {
  std::size_t lambda = 0;
  std::size_t run = 0;
  RunRecord record;
};

struct LandscapeResult {
  ProblemKind problem{};
  std::size_t n = 0;
  LandscapeAccumulator accumulator;
  std::vector<LandscapeRun> runs;

  bool budget_exhausted() const {
    return std::any_of(runs.begin(), runs.end(), [](const LandscapeRun& r) { return !r.record.reached_optimum; });
  }
};

inline LandscapeResult profile_landscape(const ExperimentConfig& cfg, ProblemKind problem, std::size_t n) {
  cfg.validate();
  const std::size_t lambda_max = cfg.profile_lambda_max;
  const std::size_t d_max = cfg.d_max_for(n);
  const std::size_t total = lambda_max * cfg.landscape_runs;
  LandscapeResult result{problem, n, LandscapeAccumulator(1, lambda_max, d_max), std::vector<LandscapeRun>(total)};
  std::mutex merge_mutex;

  parallel_for(total, cfg.threads, [&](std::size_t k) {
    const std::size_t lambda = 1 + k / cfg.landscape_runs;
    const std::size_t run = k % cfg.landscape_runs;
    const std::uint64_t seed =
        derive_seed(cell_run_seed(cfg.master_seed, kLandscapeTag, problem, n, lambda), run);
    const ProblemInstance instance = instance_for_run(problem, n, seed, cfg.clause_density);
    RngStream rng = algorithm_rng(seed);
    LandscapeAccumulator acc(lambda, lambda, d_max);
    acc.begin_run(lambda, 1);
    RunOptions opts;
    opts.budget = default_budget(n, cfg.budget_multiplier);
    auto sink = [&](const IterationOutcome& e) { acc.accumulate(lambda, e); };
    RunRecord rec = std::visit(
        [&](const auto& p) { return run_ollga(p, FixedLambda{static_cast<double>(lambda)}, rng, opts, sink); },
        instance);
    rec.seed = seed;
    result.runs[k] = {lambda, run, rec};
    std::lock_guard lock(merge_mutex);
    result.accumulator.merge(acc);
  });
  return result;
}

// ---------------------------------------------------------------------------
// CSV output

inline void write_runtimes_csv(std::ostream& os, const std::vector<RunRow>& rows) {
  os << "problem,n,algorithm,run,seed,evaluations,reached_optimum\n";
  for (const auto& r : rows) {
    os << to_string(r.problem) << ',' << r.n << ',' << to_string(r.algorithm) << ',' << r.run << ',' << r.record.seed
       << ',' << r.record.evaluations << ',' << (r.record.reached_optimum ? 1 : 0) << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "problem,n,algorithm,mean_evaluations,stddev_evaluations,runs\n";
  const auto old_precision = os.precision(12);
  for (const auto& r : rows) {
    os << to_string(r.problem) << ',' << r.n << ',' << to_string(r.algorithm) << ',' << r.mean_evaluations << ','
       << r.stddev_evaluations << ',' << r.runs << '\n';
  }
  os.precision(old_precision);
}

inline void write_landscape_runs_csv(std::ostream& os, const std::vector<LandscapeResult>& results) {
  os << "problem,n,lambda,run,seed,evaluations,reached_optimum\n";
  for (const auto& res : results) {
    for (const auto& r : res.runs) {
      os << to_string(res.problem) << ',' << res.n << ',' << r.lambda << ',' << r.run << ',' << r.record.seed << ','
         << r.record.evaluations << ',' << (r.record.reached_optimum ? 1 : 0) << '\n';
    }
  }
}

namespace detail {
inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}
}  // namespace detail

/// Exit codes of a pipeline run.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitBudgetExhausted = 2;

/// Runs the configured pipeline and writes its CSV files into cfg.out_dir.
/// Throws ConfigError on invalid configuration; returns kExitOk or
/// kExitBudgetExhausted.
inline int run_pipeline(ExperimentConfig cfg, std::ostream& log) {
  cfg.validate();
  const std::filesystem::path out(cfg.out_dir);
  std::filesystem::create_directories(out);
  bool exhausted = false;

  if (cfg.pipeline == Pipeline::landscape || cfg.pipeline == Pipeline::extrapolated) {
    std::vector<LandscapeResult> results;
    for (auto p : cfg.problems) {
      for (auto n : cfg.sizes) {
        log << "landscape " << to_string(p) << " n=" << n << " lambda=1.." << cfg.profile_lambda_max
            << " runs=" << cfg.landscape_runs << std::endl;
        results.push_back(profile_landscape(cfg, p, n));
        exhausted = exhausted || results.back().budget_exhausted();
        const LambdaSchedule schedule = extrapolate_schedule(surface(results.back().accumulator));
        const std::string suffix = cfg.sizes.size() > 1 ? "_" + std::to_string(n) : "";
        auto sched_out = detail::open_output(out / ("schedule_" + std::string(to_string(p)) + suffix + ".csv"));
        write_schedule_csv(sched_out, schedule);
        cfg.schedules[{p, n}] = std::make_shared<const LambdaSchedule>(schedule);
      }
    }
    auto land = detail::open_output(out / "landscape.csv");
    write_landscape_header(land);
    for (const auto& r : results) write_landscape_rows(land, to_string(r.problem), r.n, r.accumulator);
    auto land_runs = detail::open_output(out / "landscape_runs.csv");
    write_landscape_runs_csv(land_runs, results);
  }

  if (cfg.pipeline == Pipeline::runtimes || cfg.pipeline == Pipeline::extrapolated) {
    log << "runtimes: " << cfg.problems.size() << " problems x " << cfg.sizes.size() << " sizes x "
        << cfg.algorithms.size() << " algorithms x " << cfg.runs << " runs" << std::endl;
    const MatrixResult m = run_matrix(cfg);
    exhausted = exhausted || m.budget_exhausted();
    auto rt = detail::open_output(out / "runtimes.csv");
    write_runtimes_csv(rt, m.runs);
    auto sm = detail::open_output(out / "summary.csv");
    write_summary_csv(sm, m.summary);
  }
  return exhausted ? kExitBudgetExhausted : kExitOk;
}

}  // namespace onefifth
