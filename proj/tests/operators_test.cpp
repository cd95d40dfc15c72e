#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "onefifth/operators.hpp"
#include "oracles.hpp"

using namespace onefifth;

TEST(MutationStrength, DegenerateRateFlipsEverything) {
  RngStream rng(1);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(sample_mutation_strength(17, 1.0, rng), 17U);
  EXPECT_THROW(sample_mutation_strength(10, 0.0, rng), std::invalid_argument);
  EXPECT_THROW(sample_mutation_strength(10, 1.5, rng), std::invalid_argument);
}

TEST(MutationStrength, TwoBitsAtOneHalf) {
  // Binomial(2, 1/2) is {1/4, 1/2, 1/4}; conditioning on ≥ 1 gives {2/3, 1/3}.
  RngStream rng(2);
  std::vector<std::uint64_t> counts(2, 0);
  for (int i = 0; i < 60000; ++i) ++counts[sample_mutation_strength(2, 0.5, rng) - 1];
  const auto cs = oracle::chi_square(counts, {2.0 / 3.0, 1.0 / 3.0});
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

TEST(MutationStrength, ConditionalMeanAtLambdaTen) {
  RngStream rng(3);
  const std::size_t n = 1000;
  const double p = 10.0 / n;
  constexpr int kDraws = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const auto ell = static_cast<double>(sample_mutation_strength(n, p, rng));
    sum += ell;
    sum_sq += ell * ell;
  }
  const double mean = sum / kDraws;
  const double sd = std::sqrt(sum_sq / kDraws - mean * mean);
  EXPECT_NEAR(mean, oracle::conditional_binomial_mean(n, p), 3.0 * sd / std::sqrt(double(kDraws)));
}

struct StrengthCase {
  std::size_t n;
  double p;
};

class ConditionalBinomial : public ::testing::TestWithParam<StrengthCase> {};

TEST_P(ConditionalBinomial, ChiSquareAgainstExactPmf) {
  const auto [n, p] = GetParam();
  RngStream rng(n + 17);
  std::vector<std::uint64_t> counts(n, 0);
  for (int i = 0; i < 100000; ++i) ++counts[sample_mutation_strength(n, p, rng) - 1];
  const auto cs = oracle::chi_square(counts, oracle::conditional_binomial(n, p));
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

INSTANTIATE_TEST_SUITE_P(Cases, ConditionalBinomial,
                         ::testing::Values(StrengthCase{2, 0.5}, StrengthCase{10, 0.1}, StrengthCase{1000, 0.01}));

TEST(SampleSubset, DistinctInRangeAndExactSize) {
  RngStream rng(4);
  for (std::size_t k : {0U, 1U, 5U, 32U, 33U, 200U, 1000U}) {
    const auto s = sample_subset(1000, k, rng);
    ASSERT_EQ(s.size(), k);
    const std::set<std::size_t> unique(s.begin(), s.end());
    ASSERT_EQ(unique.size(), k);
    if (k > 0) {
      ASSERT_LT(*unique.rbegin(), 1000U);
    }
  }
  EXPECT_THROW(sample_subset(3, 4, rng), std::invalid_argument);
}

TEST(SampleSubset, SortedVariantDrawsTheSameSet) {
  std::vector<std::size_t> sorted;
  for (std::size_t k : {1U, 20U, 33U, 100U, 700U, 1000U}) {
    RngStream a(k), b(k);
    auto plain = sample_subset(1000, k, a);
    sample_subset_sorted(1000, k, b, sorted);
    std::sort(plain.begin(), plain.end());
    ASSERT_EQ(plain, sorted) << "k " << k;
    ASSERT_EQ(a(), b());
  }
}

TEST(SampleSubset, SingleFlipOnThreeBitsIsUniform) {
  RngStream rng(5);
  std::vector<std::uint64_t> counts(3, 0);
  for (int i = 0; i < 30000; ++i) ++counts[sample_subset(3, 1, rng)[0]];
  const auto cs = oracle::chi_square(counts, std::vector<double>(3, 1.0 / 3.0));
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

TEST(SampleSubset, PairsOfFiveAreUniform) {
  RngStream rng(6);
  std::vector<std::uint64_t> counts(25, 0);
  for (int i = 0; i < 50000; ++i) {
    auto s = sample_subset(5, 2, rng);
    std::sort(s.begin(), s.end());
    ++counts[s[0] * 5 + s[1]];
  }
  std::vector<std::uint64_t> pairs;
  for (std::size_t a = 0; a < 5; ++a) {
    for (std::size_t b = a + 1; b < 5; ++b) pairs.push_back(counts[a * 5 + b]);
  }
  const auto cs = oracle::chi_square(pairs, std::vector<double>(10, 0.1));
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

TEST(Mutate, FlipsExactlyEll) {
  RngStream rng(7);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = 1 + rng.below(300);
    const std::size_t ell = 1 + rng.below(n);
    const auto x = BitVector::random(n, rng);
    ASSERT_EQ(hamming_distance(x, mutate(x, ell, rng)), ell);
  }
  const auto x = BitVector::from_string("0110");
  EXPECT_EQ(mutate(x, 4, rng), x.complement());
  EXPECT_THROW(mutate(x, 0, rng), std::invalid_argument);
  EXPECT_THROW(mutate(x, 5, rng), std::invalid_argument);
}

TEST(Mutate, EveryPositionIsEquallyLikelyToFlip) {
  RngStream rng(8);
  const std::size_t n = 20, ell = 3;
  std::vector<std::uint64_t> counts(n, 0);
  const BitVector x(n);
  for (int i = 0; i < 40000; ++i) {
    const auto y = mutate(x, ell, rng);
    for (std::size_t k = 0; k < n; ++k) counts[k] += y[k] ? 1 : 0;
  }
  const auto cs = oracle::chi_square(counts, std::vector<double>(n, 1.0 / n));
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

TEST(CrossoverMask, FullBiasTakesEverything) {
  RngStream rng(9);
  const auto mask = sample_crossover_mask(6, 1.0, rng);
  EXPECT_TRUE(mask.all_from_prime());
  EXPECT_EQ(mask.take_from_prime.size(), 6U);
  EXPECT_THROW(sample_crossover_mask(6, 0.0, rng), std::invalid_argument);
}

TEST(CrossoverMask, NeverEmptyAndAscending) {
  RngStream rng(10);
  for (int i = 0; i < 5000; ++i) {
    const std::size_t n = 1 + rng.below(8);
    const auto mask = sample_crossover_mask(n, 0.01, rng);
    ASSERT_FALSE(mask.take_from_prime.empty());
    ASSERT_TRUE(std::is_sorted(mask.take_from_prime.begin(), mask.take_from_prime.end()));
    ASSERT_LT(mask.take_from_prime.back(), n);
  }
}

TEST(CrossoverMask, SizesOnTwoPositionsAtOneHalf) {
  RngStream rng(11);
  std::vector<std::uint64_t> counts(2, 0);
  for (int i = 0; i < 60000; ++i) ++counts[sample_crossover_mask(2, 0.5, rng).take_from_prime.size() - 1];
  const auto cs = oracle::chi_square(counts, {2.0 / 3.0, 1.0 / 3.0});
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

TEST(CrossoverMask, PositionMarginalsMatchConditionedBernoulli) {
  // P(i ∈ mask | mask ≠ ∅) = c / (1 - (1-c)^n).
  RngStream rng(12);
  const std::size_t n = 4;
  const double c = 0.25;
  constexpr int kDraws = 80000;
  std::vector<double> hits(n, 0.0);
  for (int i = 0; i < kDraws; ++i) {
    for (auto k : sample_crossover_mask(n, c, rng).take_from_prime) hits[k] += 1.0;
  }
  const double expected = c / (1.0 - std::pow(1.0 - c, double(n)));
  const double se = std::sqrt(expected * (1.0 - expected) / kDraws);
  for (double h : hits) EXPECT_NEAR(h / kDraws, expected, 4.0 * se);
}

TEST(ApplyCrossover, PositionwiseRule) {
  const auto x = BitVector::from_string("0000");
  const auto xp = BitVector::from_string("1111");
  EXPECT_EQ(apply_crossover(x, xp, CrossoverMask{{0, 2}, 4}), BitVector::from_string("1010"));
  EXPECT_EQ(apply_crossover(x, xp, CrossoverMask{{0, 1, 2, 3}, 4}), xp);
  EXPECT_EQ(apply_crossover(x, x, CrossoverMask{{1, 3}, 4}), x);
  EXPECT_THROW(apply_crossover(x, BitVector(5), CrossoverMask{{0}, 4}), std::invalid_argument);
}

TEST(StandardBitMutation, NeverReturnsParent) {
  RngStream rng(13);
  const auto x = BitVector::random(50, rng);
  for (int i = 0; i < 2000; ++i) ASSERT_NE(standard_bit_mutation_nonzero(x, 1.0 / 50, rng), x);
  EXPECT_EQ(standard_bit_mutation_nonzero(x, 1.0, rng), x.complement());
  EXPECT_THROW(standard_bit_mutation_nonzero(x, 0.0, rng), std::invalid_argument);
}

TEST(StandardBitMutation, FlipCountsOnTwoBits) {
  RngStream rng(14);
  std::vector<std::uint64_t> counts(2, 0);
  for (int i = 0; i < 60000; ++i) ++counts[sample_nonzero_flips(2, 0.5, rng).size() - 1];
  const auto cs = oracle::chi_square(counts, {2.0 / 3.0, 1.0 / 3.0});
  EXPECT_LT(cs.statistic, oracle::chi_square_quantile(cs.df, 0.999));
}

TEST(BernoulliPositions, AscendingWithBinomialCount) {
  RngStream rng(15);
  double total = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto pos = sample_bernoulli_positions(500, 0.02, rng);
    ASSERT_TRUE(std::is_sorted(pos.begin(), pos.end()));
    ASSERT_EQ(std::adjacent_find(pos.begin(), pos.end()), pos.end());
    total += static_cast<double>(pos.size());
  }
  EXPECT_NEAR(total / 2000.0, 10.0, 4.0 * std::sqrt(500 * 0.02 * 0.98 / 2000.0));
  EXPECT_EQ(sample_bernoulli_positions(7, 1.0, rng).size(), 7U);
}
