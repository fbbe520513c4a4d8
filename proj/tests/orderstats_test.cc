#include "brokenstick/orderstats.h"

#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "brokenstick/quadrature.h"

namespace brokenstick {
namespace {

double choose(int n, int r) {
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

// Independent specializations of the survival function.
double smallest_segment_survival(int n, double x) {
  return std::pow(std::max(0.0, 1.0 - n * x), n - 1);
}

double largest_segment_survival(int n, double x) {
  double total = 0.0;
  for (int l = 1; l <= n; ++l) {
    const double base = 1.0 - l * x;
    if (base <= 0.0) break;
    total += (l % 2 ? 1.0 : -1.0) * choose(n, l) * std::pow(base, n - 1);
  }
  return total;
}

TEST(PartialHarmonicTest, NamedValues) {
  EXPECT_DOUBLE_EQ(partial_harmonic(FieldSize(1), Rank(1)), 1.0);
  EXPECT_DOUBLE_EQ(partial_harmonic(FieldSize(2), Rank(1)), 1.5);
  EXPECT_DOUBLE_EQ(partial_harmonic(FieldSize(8), Rank(8)), 0.125);
}

TEST(PartialHarmonicTest, RankOutOfRange) {
  EXPECT_THROW(partial_harmonic(FieldSize(3), Rank(4)), std::invalid_argument);
  EXPECT_THROW(Rank(0), std::invalid_argument);
  EXPECT_THROW(FieldSize(0), std::invalid_argument);
}

TEST(CcdfTest, NamedValues) {
  EXPECT_EQ(ccdf_kth_largest(FieldSize(5), Rank(3), 0.0), 1.0);
  EXPECT_NEAR(ccdf_kth_largest(FieldSize(2), Rank(1), 0.75), 0.5, 1e-15);
  EXPECT_NEAR(ccdf_kth_largest(FieldSize(3), Rank(3), 0.2), 0.16, 1e-15);
  EXPECT_EQ(ccdf_kth_largest(FieldSize(2), Rank(1), 0.4), 1.0);
}

TEST(CcdfTest, ClampsOutsideSupport) {
  for (int n = 1; n <= 15; ++n) {
    for (int k = 1; k <= n; ++k) {
      const FieldSize fn(n);
      const Rank rk(k);
      EXPECT_EQ(ccdf_kth_largest(fn, rk, -0.5), 1.0);
      EXPECT_EQ(ccdf_kth_largest(fn, rk, 0.0), 1.0);
      EXPECT_EQ(ccdf_kth_largest(fn, rk, 1.0 / k), 0.0);
      EXPECT_EQ(ccdf_kth_largest(fn, rk, 1.0), 0.0);
      EXPECT_EQ(ccdf_kth_largest(fn, rk, 7.0), 0.0);
    }
  }
}

TEST(CcdfTest, RejectsBadRanksAndHugeFields) {
  EXPECT_THROW(ccdf_kth_largest(FieldSize(3), Rank(4), 0.1),
               std::invalid_argument);
  EXPECT_THROW(ccdf_kth_largest(FieldSize(65), Rank(1), 0.1),
               std::invalid_argument);
  EXPECT_NO_THROW(ccdf_kth_largest(FieldSize(64), Rank(1), 0.1));
}

TEST(CcdfTest, MonotoneNonincreasing) {
  for (int n : {2, 5, 9, 15, 20, 21, 33}) {
    for (int k = 1; k <= n; ++k) {
      double previous = 1.0;
      for (int i = 0; i <= 400; ++i) {
        const double x = i / 400.0;
        const double p = ccdf_kth_largest(FieldSize(n), Rank(k), x);
        EXPECT_LE(p, previous + 1e-12) << "n=" << n << " k=" << k << " x=" << x;
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        previous = p;
      }
    }
  }
}

TEST(CcdfTest, ReducesToSmallestAndLargestSegmentLaws) {
  for (int n = 1; n <= 15; ++n) {
    for (int i = 1; i < 100; ++i) {
      const double x = i / 100.0;
      EXPECT_NEAR(ccdf_kth_largest(FieldSize(n), Rank(n), x),
                  x >= 1.0 / n ? 0.0 : smallest_segment_survival(n, x), 1e-12);
      EXPECT_NEAR(ccdf_kth_largest(FieldSize(n), Rank(1), x),
                  largest_segment_survival(n, x), 1e-11);
    }
  }
}

// E[#segments longer than x] = n (1-x)^(n-1) = sum_k P[z_(k) > x].
TEST(CcdfTest, SurvivalsSumToExpectedExceedanceCount) {
  for (int n : {3, 12, 20, 21, 25, 40, 64}) {
    for (double x : {0.001, 0.01, 0.02, 0.05, 0.1, 0.3}) {
      double total = 0.0;
      for (int k = 1; k <= n; ++k) {
        total += ccdf_kth_largest(FieldSize(n), Rank(k), x);
      }
      EXPECT_NEAR(total, n * std::pow(1.0 - x, n - 1), 1e-9 * n)
          << "n=" << n << " x=" << x;
    }
  }
}

TEST(MomentsTest, NamedValues) {
  EXPECT_DOUBLE_EQ(mean_kth_largest(FieldSize(1), Rank(1)), 1.0);
  EXPECT_DOUBLE_EQ(mean_kth_largest(FieldSize(2), Rank(1)), 0.75);
  EXPECT_NEAR(mean_kth_largest(FieldSize(8), Rank(1)), 761.0 / 2240.0, 1e-15);
  EXPECT_NEAR(mean_kth_largest(FieldSize(8), Rank(1)), 0.3397321, 1e-7);

  EXPECT_DOUBLE_EQ(second_moment_kth_largest(FieldSize(1), Rank(1)), 1.0);
  EXPECT_NEAR(second_moment_kth_largest(FieldSize(2), Rank(1)), 7.0 / 12.0, 1e-15);
  double sum = 0.0;
  for (int k = 1; k <= 3; ++k) sum += second_moment_kth_largest(FieldSize(3), Rank(k));
  EXPECT_NEAR(sum, 0.5, 1e-15);

  EXPECT_DOUBLE_EQ(conditional_mean_given_win(FieldSize(1), Rank(1)), 1.0);
  EXPECT_NEAR(conditional_mean_given_win(FieldSize(2), Rank(1)), 7.0 / 9.0, 1e-15);
  EXPECT_NEAR(conditional_mean_given_win(FieldSize(2), Rank(2)), 1.0 / 3.0, 1e-15);

  EXPECT_DOUBLE_EQ(winner_segment_mean(FieldSize(1)), 1.0);
  EXPECT_DOUBLE_EQ(winner_segment_mean(FieldSize(9)), 0.2);
  EXPECT_DOUBLE_EQ(winner_segment_mean(FieldSize(3)), 0.5);
}

TEST(MomentsTest, ErrorsOnRankBeyondField) {
  EXPECT_THROW(mean_kth_largest(FieldSize(2), Rank(3)), std::invalid_argument);
  EXPECT_THROW(second_moment_kth_largest(FieldSize(2), Rank(3)),
               std::invalid_argument);
  EXPECT_THROW(conditional_mean_given_win(FieldSize(2), Rank(3)),
               std::invalid_argument);
}

TEST(MomentsTest, NormalizationWinnerIdentityAndOrdering) {
  for (int n = 1; n <= 15; ++n) {
    const SegmentLaw law{FieldSize(n)};
    double means = 0.0;
    double seconds = 0.0;
    for (int k = 1; k <= n; ++k) {
      means += law.mean(Rank(k));
      seconds += law.second_moment(Rank(k));
      if (k > 1) {
        EXPECT_GT(law.mean(Rank(k - 1)), law.mean(Rank(k)));
      }
      const double m = law.mean(Rank(k));
      const double s = law.second_moment(Rank(k));
      EXPECT_GT(m, 0.0);
      EXPECT_LE(m, 1.0);
      EXPECT_LE(m * m, s * (1.0 + 1e-15));
      EXPECT_LE(s, m);
      if (n >= 2) {
        EXPECT_GT(law.conditional_mean_given_win(Rank(k)), m);
      }
    }
    EXPECT_NEAR(means, 1.0, 1e-12) << n;
    EXPECT_NEAR(seconds, 2.0 / (n + 1), 1e-12) << n;
    EXPECT_NEAR(seconds, law.winner_segment_mean(), 1e-12) << n;
  }
}

TEST(MomentsTest, MatchIntegralsOfSurvivalFunction) {
  for (int n = 1; n <= 15; ++n) {
    for (int k = 1; k <= n; ++k) {
      const FieldSize fn(n);
      const Rank rk(k);
      auto survival = [&](double x) { return ccdf_kth_largest(fn, rk, x); };
      auto weighted = [&](double x) { return 2.0 * x * survival(x); };
      const auto bp = ccdf_breakpoints(n, k);
      const double mean = integrate_piecewise(survival, 0.0, 1.0 / k, bp).value;
      const double second = integrate_piecewise(weighted, 0.0, 1.0 / k, bp).value;
      EXPECT_NEAR(mean, mean_kth_largest(fn, rk), 1e-8) << n << "," << k;
      EXPECT_NEAR(second, second_moment_kth_largest(fn, rk), 1e-8) << n << "," << k;
    }
  }
}

TEST(MomentsTest, WidePathIntegratesToMean) {
  for (int n : {24, 40}) {
    for (int k : {1, 3, n}) {
      auto survival = [&](double x) {
        return ccdf_kth_largest(FieldSize(n), Rank(k), x);
      };
      const double mean =
          integrate_piecewise(survival, 0.0, 1.0 / k, ccdf_breakpoints(n, k)).value;
      EXPECT_NEAR(mean, mean_kth_largest(FieldSize(n), Rank(k)), 1e-8);
    }
  }
}

TEST(HistogramTest, WeightsAndSummaries) {
  FieldSizeHistogram hist({{5, 2}, {9, 1}, {7, 0}});
  EXPECT_EQ(hist.total(), 3u);
  EXPECT_EQ(hist.counts().size(), 2u);
  EXPECT_EQ(hist.min_field_size(), 5);
  EXPECT_EQ(hist.max_field_size(), 9);
  double sum = 0.0;
  for (const auto& [n, w] : hist.weights()) sum += w;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NEAR(hist.mean_field_size(), 19.0 / 3.0, 1e-12);
  EXPECT_THROW(FieldSizeHistogram().weights(), std::invalid_argument);
  EXPECT_THROW(hist.add(0), std::invalid_argument);
}

TEST(MixtureTest, NamedValues) {
  EXPECT_DOUBLE_EQ(mixture(FieldSizeHistogram({{3, 1}}),
                           Statistic::kWinnerSegmentMean, RankSelector::fixed(1)),
                   0.5);
  const FieldSizeHistogram two_three({{2, 1}, {3, 1}});
  EXPECT_NEAR(mixture(two_three, Statistic::kMean, RankSelector::fixed(1)),
              (0.75 + 11.0 / 18.0) / 2.0, 1e-15);
  EXPECT_NEAR(mixture(two_three, Statistic::kMean, RankSelector::fixed(1)),
              0.680556, 1e-6);
}

TEST(MixtureTest, LongshotUsesEachFieldSize) {
  const FieldSizeHistogram hist({{2, 1}, {4, 3}});
  const double expected = 0.25 * mean_kth_largest(FieldSize(2), Rank(2)) +
                          0.75 * mean_kth_largest(FieldSize(4), Rank(4));
  EXPECT_NEAR(mixture(hist, Statistic::kMean, RankSelector::longshot()),
              expected, 1e-15);
  EXPECT_NEAR(mixture(hist, Statistic::kCcdf, RankSelector::longshot(), 0.1),
              0.25 * 0.8 + 0.75 * std::pow(0.6, 3), 1e-14);
}

TEST(MixtureTest, Errors) {
  EXPECT_THROW(mixture(FieldSizeHistogram(), Statistic::kMean,
                       RankSelector::fixed(1)),
               std::invalid_argument);
  try {
    mixture(FieldSizeHistogram({{3, 1}, {5, 1}}), Statistic::kMean,
            RankSelector::fixed(4));
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("n=3"), std::string::npos) << e.what();
  }
}

TEST(MixtureTest, SizeBiasedConditionalWeighsByWinChance) {
  const FieldSizeHistogram hist({{2, 1}, {9, 1}});
  const auto one = RankSelector::fixed(1);
  const double expected =
      (second_moment_kth_largest(FieldSize(2), Rank(1)) +
       second_moment_kth_largest(FieldSize(9), Rank(1))) /
      (mean_kth_largest(FieldSize(2), Rank(1)) +
       mean_kth_largest(FieldSize(9), Rank(1)));
  EXPECT_NEAR(size_biased_conditional_mixture(hist, one), expected, 1e-15);
  // Degenerate histograms reduce to the per-n conditional mean.
  EXPECT_NEAR(size_biased_conditional_mixture(FieldSizeHistogram({{2, 5}}), one),
              7.0 / 9.0, 1e-15);
}

TEST(RankSelectorTest, ResolveAndLabels) {
  EXPECT_EQ(RankSelector::longshot().resolve(FieldSize(7)).value(), 7);
  EXPECT_EQ(RankSelector::fixed(2).resolve(FieldSize(7)).value(), 2);
  EXPECT_EQ(RankSelector::fixed(2).label(), "2");
  EXPECT_EQ(RankSelector::longshot().label(), "longshot");
  EXPECT_FALSE(RankSelector::fixed(4).defined_for(3));
  EXPECT_THROW(RankSelector::fixed(4).resolve(FieldSize(3)), std::invalid_argument);
  EXPECT_THROW(RankSelector::fixed(0), std::invalid_argument);
}

}  // namespace
}  // namespace brokenstick
