#include <gtest/gtest.h>

#include <vector>

#include "onefifth/stats.hpp"

using namespace onefifth;

TEST(Stats, MeanAndSampleStddev) {
  const std::vector<double> xs{2, 4, 4, 4, 5, 5, 7, 9};
  EXPECT_DOUBLE_EQ(mean(xs), 5.0);
  EXPECT_NEAR(sample_stddev(xs), std::sqrt(32.0 / 7.0), 1e-12);
  EXPECT_DOUBLE_EQ(sample_stddev(std::vector<double>{42.0}), 0.0);
  EXPECT_THROW(mean(std::vector<double>{}), std::invalid_argument);
}

TEST(MannWhitney, ReferenceValues) {
  // a = {1,2,3}, b = {4,5,6}: U_a = 0, μ = 4.5, σ² = 9·7/12 = 5.25,
  // z = (0 - 4.5 + 0.5)/√5.25 ≈ -1.7457, one-sided p ≈ 0.040428.
  // Reversed: U = 9, z = (9 - 4.5 + 0.5)/√5.25 ≈ 2.1822, p ≈ 0.985452.
  const std::vector<double> a{1, 2, 3}, b{4, 5, 6};
  EXPECT_NEAR(mann_whitney_less(a, b), 0.0404278, 1e-6);
  EXPECT_NEAR(mann_whitney_less(b, a), 0.9854518, 1e-6);
}

TEST(MannWhitney, TiesUseMidranks) {
  // a = {1,2,2}, b = {2,3,3}. Midranks: 1, 3, 3 | 3, 5.5, 5.5. U_a = 7 - 6 = 1.
  // Ties: group of 3 and group of 2 → Σ(t³-t) = 24 + 6 = 30.
  // σ² = 9/12 · (7 - 30/30) = 4.5; z = (1 - 4.5 + 0.5)/√4.5 ≈ -1.41421; p ≈ 0.078650.
  const std::vector<double> a{1, 2, 2}, b{2, 3, 3};
  EXPECT_NEAR(mann_whitney_less(a, b), 0.0786496, 1e-6);
}

TEST(MannWhitney, ClearSeparationIsSignificant) {
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) {
    a.push_back(100.0 + i);
    b.push_back(150.0 + i);
  }
  EXPECT_LT(mann_whitney_less(a, b), 1e-6);
  EXPECT_GT(mann_whitney_less(b, a), 0.999);
  EXPECT_DOUBLE_EQ(mann_whitney_less(std::vector<double>{1.0}, std::vector<double>{1.0}), 0.5);
}
