#include "brokenstick/ks.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brokenstick {

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("KS statistic needs two nonempty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    // Step past every copy of the smallest remaining value in both samples
    // before comparing, so ties do not open a spurious gap.
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("alpha must lie in (0, 1)");
  }
  if (n == 0 || m == 0) throw std::invalid_argument("empty sample");
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  return c * std::sqrt((dn + dm) / (dn * dm));
}

double ks_sup_distance_to_survival(
    std::vector<double> sample, const std::function<double(double)>& survival) {
  if (sample.empty()) throw std::invalid_argument("empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < sample.size()) {
    const double x = sample[i];
    std::size_t j = i;
    while (j < sample.size() && sample[j] == x) ++j;
    const double reference = survival(x);
    const double before = (n - static_cast<double>(i)) / n;  // S(x-)
    const double after = (n - static_cast<double>(j)) / n;   // S(x)
    d = std::max({d, std::abs(before - reference), std::abs(after - reference)});
    i = j;
  }
  return d;
}

}  // namespace brokenstick
