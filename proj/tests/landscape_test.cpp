#include <gtest/gtest.h>

#include <numeric>
#include <sstream>
#include <vector>

#include "onefifth/landscape.hpp"

using namespace onefifth;

namespace {

IterationOutcome event(std::size_t d_before, std::size_t d_after, std::uint64_t evals) {
  IterationOutcome e;
  e.distance_before = d_before;
  e.distance_after = d_after;
  e.evals_charged = evals;
  return e;
}

LandscapeAccumulator row_of(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& cells) {
  LandscapeAccumulator acc(1, cells.size(), 1);
  for (std::size_t k = 0; k < cells.size(); ++k) acc.set_cell(1, k + 1, cells[k].first, cells[k].second);
  return acc;
}

}  // namespace

TEST(Accumulate, DefinitionExamples) {
  LandscapeAccumulator acc(1, 10, 20);
  acc.accumulate(4, event(5, 3, 20));
  EXPECT_EQ(acc.evaluations(5, 4), 20U);
  EXPECT_EQ(acc.improvements(5, 4), 1U);
  acc.accumulate(4, event(5, 5, 8));
  acc.accumulate(4, event(5, 6, 8));
  EXPECT_EQ(acc.evaluations(5, 4), 36U);
  EXPECT_EQ(acc.improvements(5, 4), 1U);
  acc.accumulate(4, event(21, 19, 8));
  acc.accumulate(4, event(0, 0, 3));
  EXPECT_EQ(acc.overflow(4), 11U);
  EXPECT_THROW(acc.accumulate(11, event(1, 0, 1)), std::out_of_range);
  EXPECT_THROW(static_cast<void>(acc.evaluations(21, 4)), std::out_of_range);
}

TEST(Accumulate, MergeAddsCellsOfASubRange) {
  LandscapeAccumulator total(1, 5, 10), part(3, 3, 10);
  part.begin_run(3, 1);
  part.accumulate(3, event(2, 1, 6));
  total.merge(part);
  total.merge(part);
  EXPECT_EQ(total.evaluations(2, 3), 12U);
  EXPECT_EQ(total.improvements(2, 3), 2U);
  EXPECT_EQ(total.runs(3), 2U);
  EXPECT_EQ(total.overflow(3), 2U);
  EXPECT_THROW(total.merge(LandscapeAccumulator(1, 5, 9)), std::invalid_argument);
  EXPECT_THROW(total.merge(LandscapeAccumulator(4, 6, 10)), std::invalid_argument);
}

TEST(Surface, DivisionAndUndefinedCells) {
  const auto s = surface(row_of({{1000, 5}, {40, 0}}));
  EXPECT_DOUBLE_EQ(*s.at(1, 1), 200.0);
  EXPECT_FALSE(s.at(1, 2).has_value());
  EXPECT_EQ(s.argmin(1), 1U);
}

TEST(NearOptimalSet, TwoPercentThreshold) {
  const auto s = surface(row_of({{100, 1}, {101, 1}, {103, 1}}));
  EXPECT_EQ(near_optimal_set(s, 1), (std::vector<std::size_t>{1, 2}));
  const auto single = surface(row_of({{0, 0}, {50, 2}, {0, 0}}));
  EXPECT_EQ(near_optimal_set(single, 1), (std::vector<std::size_t>{2}));
  EXPECT_THROW(near_optimal_set(surface(row_of({{5, 0}, {5, 0}})), 1), std::domain_error);
}

TEST(ExtrapolateSchedule, ArgminWithSmallestLambdaOnTies) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> unique(10, {100, 1});
  unique[6] = {50, 1};
  EXPECT_DOUBLE_EQ(extrapolate_schedule(surface(row_of(unique))).table.at(1), 7.0);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> tie(10, {100, 1});
  tie[4] = tie[5] = {30, 1};
  EXPECT_DOUBLE_EQ(extrapolate_schedule(surface(row_of(tie))).table.at(1), 5.0);
  EXPECT_THROW(extrapolate_schedule(surface(LandscapeAccumulator(1, 3, 4))), std::domain_error);
}

TEST(Landscape, ConservationAndImprovementAudit) {
  // Fixed-λ OneMax runs: every charged evaluation lands either in a cell or in
  // the overflow bucket, and on OneMax each improving iteration decreases d.
  RngStream gen(1);
  const std::size_t n = 120, d_max = 30;
  LandscapeAccumulator acc(1, 6, d_max);
  std::vector<std::uint64_t> run_evals(7, 0), improving(7, 0);
  for (std::size_t lambda = 1; lambda <= 6; ++lambda) {
    for (int run = 0; run < 20; ++run) {
      const auto f = make_onemax(n, gen);
      RngStream rng(derive_seed(lambda, static_cast<std::uint64_t>(run)));
      acc.begin_run(lambda, 1);
      const auto rec = run_ollga(f, FixedLambda{static_cast<double>(lambda)}, rng, {}, [&](const IterationOutcome& e) {
        acc.accumulate(lambda, e);
        if (e.distance_before <= d_max && e.outcome == Outcome::improved) ++improving[lambda];
      });
      run_evals[lambda] += rec.evaluations;
    }
  }
  for (std::size_t lambda = 1; lambda <= 6; ++lambda) {
    std::uint64_t cells = 0, improvements = 0;
    for (std::size_t d = 1; d <= d_max; ++d) {
      cells += acc.evaluations(d, lambda);
      improvements += acc.improvements(d, lambda);
      // An improvement costs at least one charged evaluation.
      if (acc.improvements(d, lambda) > 0) {
        EXPECT_GE(acc.evaluations(d, lambda), acc.improvements(d, lambda));
      }
    }
    EXPECT_EQ(cells + acc.overflow(lambda), run_evals[lambda]) << "lambda " << lambda;
    EXPECT_EQ(improvements, improving[lambda]) << "lambda " << lambda;
    EXPECT_EQ(acc.runs(lambda), 20U);
  }
}

TEST(LandscapeCsv, RoundTrip) {
  LandscapeAccumulator acc(1, 3, 4);
  acc.set_cell(2, 3, 77, 5);
  acc.set_cell(4, 1, 9, 1);
  for (std::size_t l = 1; l <= 3; ++l) acc.set_runs(l, 10);
  std::stringstream io;
  write_landscape_header(io);
  write_landscape_rows(io, "onemax", 100, acc);
  write_landscape_rows(io, "maxsat", 100, LandscapeAccumulator(1, 3, 4));
  const auto back = read_landscape_csv(io, "onemax", 100);
  EXPECT_EQ(back, acc);
  std::istringstream bad("problem,n,lambda,d,E\n");
  EXPECT_THROW(read_landscape_csv(bad, "onemax", 100), std::runtime_error);
}
