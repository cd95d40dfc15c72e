#include <gtest/gtest.h>

#include <string>

#include "onefifth/bit_vector.hpp"

using onefifth::BitVector;
using onefifth::hamming_distance;

TEST(BitVector, StringRoundTrip) {
  const std::string bits = "0110100111010001011";
  EXPECT_EQ(BitVector::from_string(bits).to_string(), bits);
  EXPECT_THROW(BitVector::from_string("01x"), std::invalid_argument);
}

TEST(BitVector, TailBitsStayClear) {
  BitVector ones(70, true);
  EXPECT_EQ(ones.count(), 70U);
  EXPECT_EQ(BitVector(70).complement().count(), 70U);
  EXPECT_EQ(ones.complement(), BitVector(70));
}

TEST(BitVector, SetFlipAndAt) {
  BitVector v(130);
  v.set(129, true);
  v.flip(64);
  EXPECT_TRUE(v[129]);
  EXPECT_TRUE(v.at(64));
  EXPECT_EQ(v.count(), 2U);
  v.flip(64);
  EXPECT_FALSE(v[64]);
  EXPECT_THROW(static_cast<void>(v.at(130)), std::out_of_range);
}

TEST(HammingDistance, WorkedExamples) {
  EXPECT_EQ(hamming_distance(BitVector::from_string("0000"), BitVector::from_string("0000")), 0U);
  EXPECT_EQ(hamming_distance(BitVector::from_string("0000"), BitVector::from_string("1111")), 4U);
  EXPECT_EQ(hamming_distance(BitVector::from_string("0110"), BitVector::from_string("0101")), 2U);
}

TEST(HammingDistance, LengthMismatchThrows) {
  EXPECT_THROW(hamming_distance(BitVector(3), BitVector(4)), std::invalid_argument);
}

TEST(HammingDistance, MetricPropertiesOnRandomTriples) {
  onefifth::RngStream rng(99);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.below(200);
    const auto a = BitVector::random(n, rng);
    const auto b = BitVector::random(n, rng);
    const auto c = BitVector::random(n, rng);
    // Brute-force count as the reference.
    std::size_t brute = 0;
    for (std::size_t i = 0; i < n; ++i) brute += a[i] != b[i] ? 1 : 0;
    ASSERT_EQ(hamming_distance(a, b), brute);
    ASSERT_EQ(hamming_distance(a, b), hamming_distance(b, a));
    ASSERT_EQ(hamming_distance(a, a), 0U);
    ASSERT_LE(hamming_distance(a, c), hamming_distance(a, b) + hamming_distance(b, c));
    ASSERT_EQ(hamming_distance(a, a.complement()), n);
  }
}
