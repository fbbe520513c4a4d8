#include "brokenstick/ks.h"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "brokenstick/rng.h"

namespace brokenstick {
namespace {

TEST(KsTest, HandComputedStatistic) {
  // F_a steps at 1,2,3; F_b at 2.5,3.5. Largest gap 2/3 at x in [2, 2.5).
  EXPECT_NEAR(ks_two_sample_statistic({1, 2, 3}, {2.5, 3.5}), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(ks_two_sample_statistic({1, 2, 3}, {3, 2, 1}), 0.0);
  EXPECT_EQ(ks_two_sample_statistic({1, 1, 2}, {1, 1, 2}), 0.0);
  EXPECT_EQ(ks_two_sample_statistic({0, 1}, {5, 6}), 1.0);
  EXPECT_THROW(ks_two_sample_statistic({}, {1}), std::invalid_argument);
}

TEST(KsTest, CriticalValue) {
  // c(0.01) = sqrt(-ln(0.005)/2) = 1.62762...
  EXPECT_NEAR(ks_critical_value(0.01, 100, 100), 1.627624 * std::sqrt(0.02), 1e-6);
  EXPECT_THROW(ks_critical_value(0.0, 10, 10), std::invalid_argument);
}

TEST(KsTest, UniformSamplesPass) {
  Rng rng(4);
  std::vector<double> a, b;
  for (int i = 0; i < 20000; ++i) {
    a.push_back(rng.uniform());
    b.push_back(rng.uniform());
  }
  EXPECT_LT(ks_two_sample_statistic(a, b), ks_critical_value(0.01, a.size(), b.size()));
  EXPECT_LT(ks_sup_distance_to_survival(a, [](double x) { return 1.0 - x; }),
            1.63 / std::sqrt(20000.0));
}

TEST(KsTest, SupDistanceChecksBothSidesOfJumps) {
  // One point at 0.5; survival of U(0,1). Before the jump S=1 vs 0.5.
  EXPECT_NEAR(ks_sup_distance_to_survival({0.5}, [](double x) { return 1.0 - x; }),
              0.5, 1e-15);
}

}  // namespace
}  // namespace brokenstick
