#ifndef BROKENSTICK_QUADRATURE_H_
#define BROKENSTICK_QUADRATURE_H_

#include <functional>
#include <vector>

namespace brokenstick {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Adaptive 15-point Gauss-Kronrod integration of f over [lo, hi], split at
// every breakpoint strictly inside the interval. Each piece is refined until
// its error estimate falls below a share of `abs_tolerance`.
QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     double lo, double hi,
                                     std::vector<double> breakpoints,
                                     double abs_tolerance = 1e-10);

// Kink locations 1/m (m = k..n) of the positive-part kernels in the CCDF of
// z_(k), restricted to its support (0, 1/k].
std::vector<double> ccdf_breakpoints(int n, int k);

}  // namespace brokenstick

#endif  // BROKENSTICK_QUADRATURE_H_
