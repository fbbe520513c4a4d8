#ifndef BROKENSTICK_ORDERSTATS_H_
#define BROKENSTICK_ORDERSTATS_H_

#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace brokenstick {

// Number of segments of the unit interval (horses in a race). Always >= 1.
class FieldSize {
 public:
  explicit FieldSize(int n);
  int value() const { return n_; }

  friend bool operator==(FieldSize, FieldSize) = default;
  friend auto operator<=>(FieldSize, FieldSize) = default;

 private:
  int n_;
};

// 1-based rank of a segment when sorted by length, 1 being the largest
// (the favourite) and n the smallest (the longshot).
class Rank {
 public:
  explicit Rank(int k);
  int value() const { return k_; }

  friend bool operator==(Rank, Rank) = default;
  friend auto operator<=>(Rank, Rank) = default;

 private:
  int k_;
};

// Largest field size accepted by ccdf_kth_largest.
inline constexpr int kMaxCcdfFieldSize = 64;

// H_{n,k} = sum_{j=k}^{n} 1/j.
double partial_harmonic(FieldSize n, Rank k);

// P[z_(k) > x | n] for the k-th largest of n uniform spacings. x is clamped:
// returns 1 for x <= 0 and 0 for x >= 1/k.
//
// The alternating binomial sums cancel badly as n grows. Up to n = 16 they are
// accumulated in long double with compensated summation; beyond that a 166-bit
// software float is used. Throws std::invalid_argument for n > 64.
double ccdf_kth_largest(FieldSize n, Rank k, double x);

// E[z_(k)] = H_{n,k} / n.
double mean_kth_largest(FieldSize n, Rank k);

// E[z_(k)^2] = 2 / (n (n+1)) * sum_{j=k}^{n} H_{n,j} / j.
double second_moment_kth_largest(FieldSize n, Rank k);

// Size-biased mean E[z_(k) | a uniform point falls in z_(k)], i.e. the
// expected length of the k-th largest segment given that it "wins".
double conditional_mean_given_win(FieldSize n, Rank k);

// Expected length of the segment containing a uniform point: 2 / (n+1).
double winner_segment_mean(FieldSize n);

// Bundles the order-statistic quantities of one field size.
class SegmentLaw {
 public:
  explicit SegmentLaw(FieldSize n) : n_(n) {}

  FieldSize field_size() const { return n_; }
  double ccdf(Rank k, double x) const { return ccdf_kth_largest(n_, k, x); }
  double mean(Rank k) const { return mean_kth_largest(n_, k); }
  double second_moment(Rank k) const {
    return second_moment_kth_largest(n_, k);
  }
  double conditional_mean_given_win(Rank k) const {
    return brokenstick::conditional_mean_given_win(n_, k);
  }
  double winner_segment_mean() const {
    return brokenstick::winner_segment_mean(n_);
  }

 private:
  FieldSize n_;
};

// Empirical distribution of field sizes; the weights of every mixture.
class FieldSizeHistogram {
 public:
  FieldSizeHistogram() = default;
  explicit FieldSizeHistogram(
      std::initializer_list<std::pair<int, std::uint64_t>> counts);

  void add(int n, std::uint64_t count = 1);

  bool empty() const { return total_ == 0; }
  std::uint64_t total() const { return total_; }
  int min_field_size() const;
  int max_field_size() const;
  double mean_field_size() const;
  // Entries with zero count are not stored.
  const std::map<int, std::uint64_t>& counts() const { return counts_; }
  // w_n = count(n) / total. Throws std::invalid_argument when empty.
  std::vector<std::pair<int, double>> weights() const;

  friend bool operator==(const FieldSizeHistogram&,
                         const FieldSizeHistogram&) = default;

 private:
  std::map<int, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Selects a rank per field size: a fixed k, or the longshot k = n.
class RankSelector {
 public:
  static RankSelector fixed(int k);
  static RankSelector longshot() { return RankSelector(0); }

  bool is_longshot() const { return k_ == 0; }
  // Fixed rank; only meaningful when !is_longshot().
  int fixed_rank() const { return k_; }
  Rank resolve(FieldSize n) const;
  // Whether the rank exists in a field of size n.
  bool defined_for(int n) const { return is_longshot() || k_ <= n; }
  // "1", "2", ... or "longshot".
  std::string label() const;

  friend bool operator==(RankSelector, RankSelector) = default;

 private:
  explicit RankSelector(int k) : k_(k) {}
  int k_;
};

enum class Statistic {
  kMean,
  kSecondMoment,
  kConditionalMean,
  kWinnerSegmentMean,
  kCcdf,
};

// sum_n w_n * statistic(n, k(n)). `x` is only read for Statistic::kCcdf.
// Throws std::invalid_argument for an empty histogram or a fixed rank that
// exceeds some n in the support (the message names that n).
double mixture(const FieldSizeHistogram& hist, Statistic statistic,
               RankSelector selector, double x = 0.0);

// Expected length of z_(k) over races in which rank k won, when n follows
// `hist`: sum_n w_n E[z_(k)^2|n] / sum_n w_n E[z_(k)|n]. The flat mixture of
// conditional_mean_given_win ignores that winning at rank k is itself more
// likely in small fields.
double size_biased_conditional_mixture(const FieldSizeHistogram& hist,
                                       RankSelector selector);

}  // namespace brokenstick

#endif  // BROKENSTICK_ORDERSTATS_H_
