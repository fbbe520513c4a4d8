#include "brokenstick/rng.h"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace brokenstick {
namespace {

// Golden values from an independent reimplementation of SplitMix64 and
// xoshiro256** with this project's (seed, stream) seeding.
TEST(RngTest, SplitMix64ReferenceOutputs) {
  EXPECT_EQ(SplitMix64(0).next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(SplitMix64(1234567).next(), 0x599ed017fb08fc85ULL);
}

TEST(RngTest, GoldenStreams) {
  Rng a(42);
  EXPECT_EQ(a.next(), 0x1ff785474f113b15ULL);
  EXPECT_EQ(a.next(), 0x4b7867ceff5d8325ULL);
  EXPECT_EQ(a.next(), 0x90ca7a95a9909966ULL);

  Rng b(42, 7);
  EXPECT_EQ(b.next(), 0x24bfb39aeb008c15ULL);
  EXPECT_EQ(b.next(), 0xd858489e7fc02496ULL);

  Rng c(0);
  EXPECT_DOUBLE_EQ(c.uniform(), 0.9817508439859699);
}

TEST(RngTest, StreamsDiffer) {
  Rng a(9, 0);
  Rng b(9, 1);
  EXPECT_NE(a.next(), b.next());
}

TEST(RngTest, VariateRanges) {
  Rng rng(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open_closed();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    ASSERT_GE(rng.exponential(), 0.0);
    ASSERT_LT(rng.below(7), 7u);
  }
}

TEST(RngTest, MomentsOfVariates) {
  Rng rng(11);
  const int n = 400000;
  double exp_sum = 0.0, norm_sum = 0.0, norm_sq = 0.0;
  std::vector<int> counts(5, 0);
  for (int i = 0; i < n; ++i) {
    exp_sum += rng.exponential();
    const double z = rng.normal();
    norm_sum += z;
    norm_sq += z * z;
    ++counts[rng.below(5)];
  }
  // Five standard errors.
  EXPECT_NEAR(exp_sum / n, 1.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(norm_sum / n, 0.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(norm_sq / n, 1.0, 5.0 * std::sqrt(2.0 / n));
  for (int c : counts) {
    EXPECT_NEAR(c / double(n), 0.2, 5.0 * std::sqrt(0.16 / n));
  }
}

}  // namespace
}  // namespace brokenstick
