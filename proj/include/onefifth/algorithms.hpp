#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <type_traits>
#include <vector>

#include "onefifth/bit_vector.hpp"
#include "onefifth/controllers.hpp"
#include "onefifth/core.hpp"
#include "onefifth/operators.hpp"
#include "onefifth/problems.hpp"
#include "onefifth/rng.hpp"

namespace onefifth {

/// What happened in one iteration of a driver.
struct IterationOutcome {
  std::uint64_t iteration = 0;  // 1-based
  double lambda = 1.0;
  std::size_t population = 1;  // λ', 1 for RLS and the (1+1) EA
  std::size_t ell = 0;         // mutation strength (flip count for the baselines)
  std::uint64_t evals_charged = 0;
  Fitness fitness_before = 0;
  Fitness fitness_after = 0;
  std::size_t distance_before = 0;
  std::size_t distance_after = 0;
  Outcome outcome = Outcome::worse;
  bool skipped_evaluation = false;  // some crossover offspring reused f(x')
  bool terminal = false;            // the optimum was found during this iteration
};

struct NoTrace {
  void operator()(const IterationOutcome&) const noexcept {}
};

/// Collects every event in memory.
struct TraceRecorder {
  std::vector<IterationOutcome> events;
  void operator()(const IterationOutcome& e) { events.push_back(e); }
};

inline void write_trace_header(std::ostream& os) { os << "iter,lambda,ell,evals,fit_before,fit_after,d_before,d_after\n"; }

inline void write_trace_row(std::ostream& os, const IterationOutcome& e) {
  os << e.iteration << ',' << e.lambda << ',' << e.ell << ',' << e.evals_charged << ',' << e.fitness_before << ','
     << e.fitness_after << ',' << e.distance_before << ',' << e.distance_after << '\n';
}

struct RunOptions {
  std::uint64_t budget = EvalCounter::kUnbounded;
  std::optional<BitVector> start;  // random when empty
};

/// Default budget: 10^4 evaluations per bit.
inline std::uint64_t default_budget(std::size_t n, std::uint64_t multiplier = 10'000) { return multiplier * n; }

namespace detail {

/// Parent state shared by all drivers. Tracks the distance to the target
/// incrementally as flips are applied.
template <Problem P>
class Parent {
 public:
  Parent(const P& instance, RngStream& rng, const RunOptions& opts)
      : instance_(instance), counter_(opts.budget) {
    x_ = opts.start ? *opts.start : BitVector::random(instance.size(), rng);
    if (x_.size() != instance.size()) throw std::invalid_argument("run: start point has wrong length");
    distance_ = hamming_distance(x_, instance.target());
  }

  /// Charges and evaluates the starting point. False when the budget is zero.
  bool initialize() {
    if (!counter_.charge()) return false;
    fitness_ = instance_.evaluate(x_);
    cache_ = instance_.make_cache(x_);
    return true;
  }

  /// Charges one evaluation and returns f(x ⊕ flips), or nullopt if the
  /// budget is spent.
  std::optional<Fitness> evaluate_flipped(std::span<const std::size_t> flips) {
    if (!counter_.charge()) return std::nullopt;
    return instance_.evaluate_flipped(cache_, x_, fitness_, flips);
  }

  void apply(std::span<const std::size_t> flips, Fitness new_fitness) {
    instance_.commit(cache_, x_, flips);
    const BitVector& z = instance_.target();
    for (std::size_t i : flips) {
      if (x_[i] == z[i]) {
        ++distance_;
      } else {
        --distance_;
      }
      x_.flip(i);
    }
    fitness_ = new_fitness;
  }

  bool at_optimum(Fitness f) const noexcept { return f == instance_.optimum_value(); }

  const BitVector& x() const noexcept { return x_; }
  Fitness fitness() const noexcept { return fitness_; }
  std::size_t distance() const noexcept { return distance_; }
  const EvalCounter& counter() const noexcept { return counter_; }

  RunRecord record(std::uint64_t seed, std::uint64_t iterations) const {
    return {counter_.count(), at_optimum(fitness_), fitness_, seed, iterations};
  }

 private:
  const P& instance_;
  EvalCounter counter_;
  typename P::Cache cache_{};
  BitVector x_;
  Fitness fitness_ = 0;
  std::size_t distance_ = 0;
};

/// Keeps a uniformly random element among those with maximal key seen so far
/// (reservoir sampling over the ties).
class ArgmaxPicker {
 public:
  /// Returns true when the offered candidate becomes the current pick.
  bool offer(Fitness f, RngStream& rng) {
    if (!has_ || f > best_) {
      has_ = true;
      best_ = f;
      ties_ = 1;
      return true;
    }
    if (f == best_) {
      ++ties_;
      return rng.below(ties_) == 0;
    }
    return false;
  }

  bool has_value() const noexcept { return has_; }
  Fitness best() const noexcept { return best_; }

 private:
  bool has_ = false;
  Fitness best_ = 0;
  std::uint64_t ties_ = 0;
};

/// Shared loop of the two single-offspring baselines: `propose` returns the
/// ascending flip set of the next offspring; acceptance on f(y) >= f(x).
template <Problem P, class Propose, class Sink>
RunRecord run_elitist_single(const P& instance, RngStream& rng, const RunOptions& opts, Propose propose, Sink& sink) {
  Parent<P> parent(instance, rng, opts);
  const std::uint64_t seed = rng.seed();
  if (!parent.initialize()) return parent.record(seed, 0);
  std::uint64_t iter = 0;
  while (!parent.at_optimum(parent.fitness())) {
    const std::vector<std::size_t> flips = propose();
    const auto fy = parent.evaluate_flipped(flips);
    if (!fy) break;
    ++iter;
    IterationOutcome e;
    e.iteration = iter;
    e.ell = flips.size();
    e.evals_charged = 1;
    e.fitness_before = parent.fitness();
    e.distance_before = parent.distance();
    e.outcome = classify(parent.fitness(), *fy);
    if (*fy >= parent.fitness()) parent.apply(flips, *fy);
    e.fitness_after = parent.fitness();
    e.distance_after = parent.distance();
    e.terminal = parent.at_optimum(parent.fitness());
    sink(e);
  }
  return parent.record(seed, iter);
}

}  // namespace detail

/// Randomized local search: flip one uniformly random bit, keep the result if
/// it is not worse.
template <Problem P, class Sink = NoTrace>
RunRecord run_rls(const P& instance, RngStream& rng, const RunOptions& opts = {}, Sink&& sink = {}) {
  const std::size_t n = instance.size();
  return detail::run_elitist_single(
      instance, rng, opts, [&] { return std::vector<std::size_t>{static_cast<std::size_t>(rng.below(n))}; }, sink);
}

/// (1+1) EA with standard bit mutation at rate 1/n, redrawn when no bit flips.
template <Problem P, class Sink = NoTrace>
RunRecord run_opo_ea(const P& instance, RngStream& rng, const RunOptions& opts = {}, Sink&& sink = {}) {
  const std::size_t n = instance.size();
  const double rate = 1.0 / static_cast<double>(n);
  return detail::run_elitist_single(instance, rng, opts, [&] { return sample_nonzero_flips(n, rate, rng); }, sink);
}

/// The (1+(λ,λ)) GA driven by a λ controller.
///
/// Each iteration draws one mutation strength ℓ ≥ 1 shared by all λ' mutants,
/// picks the mutation winner x' uniformly among the fittest mutants, then
/// builds λ' crossover offspring. A crossover offspring is described by the
/// subset of x'’s flipped positions it inherits; that subset is drawn with
/// bias c = 1/λ and redrawn while empty, and an offspring inheriting all of
/// them is x' itself and reuses f(x') without an evaluation. Offspring are
/// therefore never identical to x. The best offspring (ties uniform) replaces
/// x when not worse. The run stops as soon as an evaluated individual is
/// optimal.
template <Problem P, class Sink = NoTrace>
RunRecord run_ollga(const P& instance, const ControllerSpec& controller_spec, RngStream& rng,
                    const RunOptions& opts = {}, Sink&& sink = {}) {
  LambdaController controller(controller_spec);
  detail::Parent<P> parent(instance, rng, opts);
  const std::uint64_t seed = rng.seed();
  if (!parent.initialize()) return parent.record(seed, 0);

  const std::size_t n = instance.size();
  std::vector<std::size_t> mutant, best_mutant, offspring, best_offspring;
  std::uint64_t iter = 0;

  while (!parent.at_optimum(parent.fitness())) {
    const double lambda = controller.begin_iteration(parent.distance());
    const std::size_t pop = std::max<std::size_t>(1, population_size(lambda));
    const double p = std::min(1.0, lambda / static_cast<double>(n));
    const double c = std::min(1.0, 1.0 / lambda);
    const std::size_t ell = sample_mutation_strength(n, p, rng);

    IterationOutcome e;
    e.iteration = iter + 1;
    e.lambda = lambda;
    e.population = pop;
    e.ell = ell;
    e.fitness_before = parent.fitness();
    e.distance_before = parent.distance();

    const auto finish = [&](std::span<const std::size_t> flips, Fitness f, Outcome outcome, bool terminal) {
      if (outcome != Outcome::worse) parent.apply(flips, f);
      e.outcome = outcome;
      e.terminal = terminal;
      e.fitness_after = parent.fitness();
      e.distance_after = parent.distance();
      ++iter;
      sink(e);
    };

    // Mutation phase.
    bool out_of_budget = false;
    bool found_optimum = false;
    detail::ArgmaxPicker mutation_pick;
    Fitness mutant_fitness = 0;
    for (std::size_t i = 0; i < pop; ++i) {
      sample_subset_sorted(n, ell, rng, mutant);
      assert(mutant.size() == ell);
      const auto f = parent.evaluate_flipped(mutant);
      if (!f) {
        out_of_budget = true;
        break;
      }
      ++e.evals_charged;
      if (parent.at_optimum(*f)) {
        finish(mutant, *f, Outcome::improved, true);
        found_optimum = true;
        break;
      }
      if (mutation_pick.offer(*f, rng)) {
        best_mutant.swap(mutant);
        mutant_fitness = *f;
      }
    }
    if (out_of_budget || found_optimum) break;

    // Crossover phase.
    detail::ArgmaxPicker crossover_pick;
    Fitness offspring_fitness = 0;
    for (std::size_t i = 0; i < pop; ++i) {
      const CrossoverMask mask = sample_crossover_mask(ell, c, rng);
      offspring.clear();
      for (std::size_t k : mask.take_from_prime) offspring.push_back(best_mutant[k]);
      Fitness f = mutant_fitness;
      if (mask.all_from_prime()) {
        e.skipped_evaluation = true;
      } else {
        const auto fe = parent.evaluate_flipped(offspring);
        if (!fe) {
          out_of_budget = true;
          break;
        }
        ++e.evals_charged;
        f = *fe;
        if (parent.at_optimum(f)) {
          finish(offspring, f, Outcome::improved, true);
          found_optimum = true;
          break;
        }
      }
      if (crossover_pick.offer(f, rng)) {
        best_offspring.swap(offspring);
        offspring_fitness = f;
      }
    }
    if (out_of_budget || found_optimum) break;

    const Outcome outcome = classify(parent.fitness(), offspring_fitness);
    finish(best_offspring, offspring_fitness, outcome, false);
    controller.end_iteration(outcome);
  }
  return parent.record(seed, iter);
}

}  // namespace onefifth
