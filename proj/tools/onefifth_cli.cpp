// Command-line front end for the experiment pipelines.
//
//   onefifth --pipeline runtimes --problems onemax --sizes 1000 --runs 100
//   onefifth --pipeline landscape --problems onemax --sizes 1000 --landscape-runs 100
//   onefifth --pipeline extrapolated --sizes 1000 --runs 100 --landscape-runs 100
//   onefifth --dump-instance maxsat --sizes 20 --seed 7
//
// Exit codes: 0 success, 1 configuration error, 2 some run hit the budget.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "onefifth/harness.hpp"

namespace {

using namespace onefifth;

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      const auto comma = item.find(',', start);
      const auto piece = item.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!piece.empty()) out.push_back(piece);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

std::uint64_t parse_seed(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const auto value = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError(std::string(what) + ": not an unsigned integer: '" + text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Runtime and landscape experiments for the (1+(lambda,lambda)) GA with self-adjusting lambda"};
  app.option_defaults()->always_capture_default();

  ExperimentConfig cfg;
  std::string pipeline = "runtimes";
  std::vector<std::string> problems{"onemax", "linint2", "linint5", "linintn", "maxsat"};
  std::vector<std::string> algos{"ollga-n", "ollga-logn", "ollga-n-mod", "ollga-logn-mod", "opo-ea", "rls"};
  std::vector<std::size_t> sizes = cfg.sizes;
  std::string seed_text = "1";
  std::string cap = "n";
  std::string dump_problem;
  std::size_t d_max = 0;

  app.add_option("--pipeline", pipeline, "runtimes | landscape | extrapolated")
      ->check(CLI::IsMember({"runtimes", "landscape", "extrapolated"}));
  app.add_option("--problems", problems, "Comma-separated: onemax,linint2,linint5,linintn,maxsat")->delimiter(',');
  app.add_option("--sizes", sizes, "Comma-separated problem sizes n")->delimiter(',');
  app.add_option("--runs", cfg.runs, "Independent runs per (problem, n, algorithm) cell");
  app.add_option("--seed", seed_text, "Master seed (overridden by ONEFIFTH_SEED)");
  app.add_option("--algos", algos,
                 "Comma-separated: ollga-n,ollga-logn,ollga-n-mod,ollga-logn-mod,opo-ea,rls,ollga-extra,ollga,ollga-mod")
      ->delimiter(',');
  app.add_option("--cap", cap, "Cap for the generic ollga / ollga-mod names: n or 2ln")
      ->check(CLI::IsMember({"n", "2ln"}));
  app.add_option("--cap-log-base", cfg.cap_log_base, "Logarithm base of the 2 log n cap");
  app.add_option("--schedule", cfg.schedule_path, "Schedule CSV (d,lambda) or a directory of schedule_<problem>.csv");
  app.add_option("--out", cfg.out_dir, "Output directory");
  app.add_option("--budget-mult", cfg.budget_multiplier, "Evaluation budget per bit");
  app.add_option("--threads", cfg.threads, "Worker threads");
  app.add_option("--landscape-runs", cfg.landscape_runs, "Runs per lambda in the landscape protocol");
  app.add_option("--profile-lambda-max", cfg.profile_lambda_max, "Largest fixed lambda profiled");
  app.add_option("--dmax", d_max, "Largest profiled distance (0 = n/2)");
  app.add_option("--clause-density", cfg.clause_density, "MAX-3SAT clauses per n ln n");
  app.add_option("--dump-instance", dump_problem, "Print the instance of run 0 for this problem and the first size, then exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    cfg.master_seed = parse_seed(seed_text, "--seed");
    if (const char* env = std::getenv("ONEFIFTH_SEED"); env != nullptr && *env != '\0') {
      cfg.master_seed = parse_seed(env, "ONEFIFTH_SEED");
    }
    cfg.pipeline = *parse_pipeline(pipeline);
    cfg.cap = cap == "n" ? CapPolicy::n : CapPolicy::two_ln;
    cfg.sizes = sizes;
    if (d_max > 0) cfg.d_max = d_max;
    cfg.problems.clear();
    for (const auto& name : split_list(problems)) {
      const auto p = parse_problem(name);
      if (!p) throw ConfigError("unknown problem '" + name + "'");
      cfg.problems.push_back(*p);
    }
    cfg.algorithms.clear();
    for (const auto& name : split_list(algos)) {
      const auto a = parse_algorithm(name);
      if (!a) throw ConfigError("unknown algorithm '" + name + "'");
      cfg.algorithms.push_back(*a);
    }

    if (!dump_problem.empty()) {
      const auto p = parse_problem(dump_problem);
      if (!p) throw ConfigError("unknown problem '" + dump_problem + "'");
      if (cfg.sizes.empty()) throw ConfigError("--dump-instance needs a size");
      const std::size_t n = cfg.sizes.front();
      const std::uint64_t seed = cell_run_seed(cfg.master_seed, kRuntimeTag, *p, n, 0);
      dump_instance(std::cout, to_string(*p), instance_for_run(*p, n, seed, cfg.clause_density), seed);
      return kExitOk;
    }

    const int code = run_pipeline(cfg, std::cerr);
    if (code == kExitBudgetExhausted) std::cerr << "warning: some runs exhausted the evaluation budget\n";
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
}
