#include "brokenstick/orderstats.h"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "numeric_util.h"

namespace brokenstick {

namespace {

using WideFloat = boost::multiprecision::cpp_bin_float_50;

// The alternating sums lose roughly 3^n ulps to cancellation. Field sizes up
// to this bound are evaluated in 64-bit-significand long double, the rest in
// 50 decimal digits.
constexpr int kExtendedPathMaxFieldSize = 16;
static_assert(std::numeric_limits<long double>::digits >= 64,
              "long double must carry at least a 64-bit significand");

void check_rank(FieldSize n, Rank k) {
  if (k.value() > n.value()) {
    throw std::invalid_argument("rank " + std::to_string(k.value()) +
                                " exceeds field size " +
                                std::to_string(n.value()));
  }
}

using BinomialRow = std::array<std::uint64_t, kMaxCcdfFieldSize + 1>;

const std::array<BinomialRow, kMaxCcdfFieldSize + 1>& binomial_table() {
  static const auto table = [] {
    std::array<BinomialRow, kMaxCcdfFieldSize + 1> t{};
    for (int n = 0; n <= kMaxCcdfFieldSize; ++n) {
      t[n][0] = 1;
      for (int j = 1; j <= n; ++j) t[n][j] = t[n - 1][j - 1] + t[n - 1][j];
    }
    return t;
  }();
  return table;
}

template <typename Real>
Real int_pow(Real base, int exponent) {
  Real result = 1;
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

// Plain summation for the wide type; its precision absorbs the cancellation.
template <typename Real>
struct Accumulator {
  Real sum = 0;
  void add(const Real& v) { sum += v; }
  Real value() const { return sum; }
};

template <>
struct Accumulator<long double> {
  detail::NeumaierSum<long double> sum;
  void add(long double v) { sum.add(v); }
  long double value() const { return sum.value(); }
};

// [1 - m x]_+^{n-1}; zero once the segment count m no longer fits.
template <typename Real>
Real positive_part_kernel(int m, const Real& x, int n) {
  Real base = Real(1) - Real(m) * x;
  if (base <= 0) return Real(0);
  return int_pow(base, n - 1);
}

// Direct evaluation of
//   sum_{j=1}^{k-1} C(n,j) sum_{l=0}^{n-j} (-1)^{l-1} C(n-j,l) [1-(j+l)x]_+^{n-1}
//   + sum_{l=1}^{n} (-1)^{l-1} C(n,l) [1-lx]_+^{n-1}.
// The j-th inner sum is minus the probability that exactly j segments exceed
// x, so the whole expression is P[at least k segments exceed x].
template <typename Real>
Real ccdf_terms(int n, int k, const Real& x) {
  const auto& binom = binomial_table();
  Accumulator<Real> acc;
  for (int j = 1; j < k; ++j) {
    const Real outer = Real(binom[n][j]);
    for (int l = 0; l <= n - j; ++l) {
      const Real kernel = positive_part_kernel(j + l, x, n);
      if (kernel == 0) break;  // kernels vanish for all larger l too
      Real term = outer * Real(binom[n - j][l]) * kernel;
      acc.add((l % 2 == 1) ? term : Real(-term));
    }
  }
  for (int l = 1; l <= n; ++l) {
    const Real kernel = positive_part_kernel(l, x, n);
    if (kernel == 0) break;
    Real term = Real(binom[n][l]) * kernel;
    acc.add((l % 2 == 1) ? term : Real(-term));
  }
  return acc.value();
}

}  // namespace

FieldSize::FieldSize(int n) : n_(n) {
  if (n < 1) {
    throw std::invalid_argument("field size must be >= 1, got " +
                                std::to_string(n));
  }
}

Rank::Rank(int k) : k_(k) {
  if (k < 1) {
    throw std::invalid_argument("rank must be >= 1, got " + std::to_string(k));
  }
}

double partial_harmonic(FieldSize n, Rank k) {
  check_rank(n, k);
  double sum = 0.0;
  // Smallest terms first.
  for (int j = n.value(); j >= k.value(); --j) sum += 1.0 / j;
  return sum;
}

double ccdf_kth_largest(FieldSize n, Rank k, double x) {
  check_rank(n, k);
  if (n.value() > kMaxCcdfFieldSize) {
    throw std::invalid_argument("ccdf_kth_largest supports n <= " +
                                std::to_string(kMaxCcdfFieldSize) + ", got " +
                                std::to_string(n.value()));
  }
  if (!(x > 0.0)) return 1.0;
  if (x >= 1.0 / k.value()) return 0.0;

  double p = 0.0;
  if (n.value() <= kExtendedPathMaxFieldSize) {
    p = static_cast<double>(
        ccdf_terms<long double>(n.value(), k.value(), static_cast<long double>(x)));
  } else {
    p = ccdf_terms<WideFloat>(n.value(), k.value(), WideFloat(x))
            .convert_to<double>();
  }
  return std::clamp(p, 0.0, 1.0);
}

double mean_kth_largest(FieldSize n, Rank k) {
  return partial_harmonic(n, k) / n.value();
}

double second_moment_kth_largest(FieldSize n, Rank k) {
  check_rank(n, k);
  const int size = n.value();
  double harmonic_tail = 0.0;  // H_{n,j}
  double sum = 0.0;
  for (int j = size; j >= k.value(); --j) {
    harmonic_tail += 1.0 / j;
    sum += harmonic_tail / j;
  }
  return 2.0 * sum / (static_cast<double>(size) * (size + 1));
}

double conditional_mean_given_win(FieldSize n, Rank k) {
  return second_moment_kth_largest(n, k) / mean_kth_largest(n, k);
}

double winner_segment_mean(FieldSize n) { return 2.0 / (n.value() + 1.0); }

FieldSizeHistogram::FieldSizeHistogram(
    std::initializer_list<std::pair<int, std::uint64_t>> counts) {
  for (const auto& [n, count] : counts) add(n, count);
}

void FieldSizeHistogram::add(int n, std::uint64_t count) {
  FieldSize checked(n);
  if (count == 0) return;
  counts_[checked.value()] += count;
  total_ += count;
}

int FieldSizeHistogram::min_field_size() const {
  if (empty()) throw std::invalid_argument("field-size histogram is empty");
  return counts_.begin()->first;
}

int FieldSizeHistogram::max_field_size() const {
  if (empty()) throw std::invalid_argument("field-size histogram is empty");
  return counts_.rbegin()->first;
}

double FieldSizeHistogram::mean_field_size() const {
  double sum = 0.0;
  for (const auto& [n, w] : weights()) sum += n * w;
  return sum;
}

std::vector<std::pair<int, double>> FieldSizeHistogram::weights() const {
  if (empty()) throw std::invalid_argument("field-size histogram is empty");
  std::vector<std::pair<int, double>> w;
  w.reserve(counts_.size());
  const double total = static_cast<double>(total_);
  for (const auto& [n, count] : counts_) {
    w.emplace_back(n, static_cast<double>(count) / total);
  }
  return w;
}

RankSelector RankSelector::fixed(int k) {
  Rank checked(k);
  return RankSelector(checked.value());
}

Rank RankSelector::resolve(FieldSize n) const {
  if (is_longshot()) return Rank(n.value());
  Rank k(k_);
  check_rank(n, k);
  return k;
}

std::string RankSelector::label() const {
  return is_longshot() ? "longshot" : std::to_string(k_);
}

namespace {

void check_mixture_support(const FieldSizeHistogram& hist,
                           RankSelector selector) {
  if (hist.empty()) {
    throw std::invalid_argument("mixture over an empty field-size histogram");
  }
  for (const auto& [n, count] : hist.counts()) {
    if (!selector.defined_for(n)) {
      throw std::invalid_argument(
          "rank " + selector.label() +
          " is undefined for field size n=" + std::to_string(n) +
          " in the histogram");
    }
  }
}

}  // namespace

double mixture(const FieldSizeHistogram& hist, Statistic statistic,
               RankSelector selector, double x) {
  check_mixture_support(hist, selector);
  detail::NeumaierSum<> sum;
  for (const auto& [size, weight] : hist.weights()) {
    const FieldSize n(size);
    const Rank k = selector.resolve(n);
    double value = 0.0;
    switch (statistic) {
      case Statistic::kMean:
        value = mean_kth_largest(n, k);
        break;
      case Statistic::kSecondMoment:
        value = second_moment_kth_largest(n, k);
        break;
      case Statistic::kConditionalMean:
        value = conditional_mean_given_win(n, k);
        break;
      case Statistic::kWinnerSegmentMean:
        value = winner_segment_mean(n);
        break;
      case Statistic::kCcdf:
        value = ccdf_kth_largest(n, k, x);
        break;
    }
    sum.add(weight * value);
  }
  return sum.value();
}

double size_biased_conditional_mixture(const FieldSizeHistogram& hist,
                                       RankSelector selector) {
  return mixture(hist, Statistic::kSecondMoment, selector) /
         mixture(hist, Statistic::kMean, selector);
}

}  // namespace brokenstick
