#ifndef BROKENSTICK_KS_H_
#define BROKENSTICK_KS_H_

#include <cstddef>
#include <functional>
#include <vector>

namespace brokenstick {

// sup_x |F_a(x) - F_b(x)| between the empirical CDFs of two samples.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sample critical value c(alpha) * sqrt((n + m) / (n m)) with
// c(alpha) = sqrt(-log(alpha / 2) / 2); alpha = 0.01 gives c = 1.628.
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

// sup_x |S_emp(x) - survival(x)| for a continuous reference survival function,
// checking both sides of every jump of the empirical curve.
double ks_sup_distance_to_survival(
    std::vector<double> sample, const std::function<double(double)>& survival);

}  // namespace brokenstick

#endif  // BROKENSTICK_KS_H_
