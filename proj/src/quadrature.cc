#include "brokenstick/quadrature.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace brokenstick {

QuadratureResult integrate_piecewise(const std::function<double(double)>& f,
                                     double lo, double hi,
                                     std::vector<double> breakpoints,
                                     double abs_tolerance) {
  if (!(lo <= hi)) throw std::invalid_argument("integrate_piecewise: lo > hi");
  if (!(abs_tolerance > 0.0)) {
    throw std::invalid_argument("integrate_piecewise: tolerance must be > 0");
  }
  std::vector<double> edges{lo};
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double b : breakpoints) {
    if (b > edges.back() && b < hi) edges.push_back(b);
  }
  edges.push_back(hi);

  const std::size_t pieces = edges.size() - 1;
  const double piece_tolerance = abs_tolerance / static_cast<double>(pieces);
  QuadratureResult result;
  for (std::size_t i = 0; i < pieces; ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    double error = 0.0;
    double l1 = 0.0;
    // Boost's tolerance is relative to the L1 norm of the piece; rescale it so
    // the absolute error stays under the per-piece share.
    const double first = boost::math::quadrature::gauss_kronrod<double, 15>::
        integrate(f, edges[i], edges[i + 1], 0, piece_tolerance, &error, &l1);
    double value = first;
    if (error > piece_tolerance && l1 > 0.0) {
      value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          f, edges[i], edges[i + 1], 20, piece_tolerance / l1, &error);
    }
    result.value += value;
    result.error_estimate += error;
  }
  return result;
}

std::vector<double> ccdf_breakpoints(int n, int k) {
  std::vector<double> points;
  for (int m = k; m <= n; ++m) points.push_back(1.0 / m);
  return points;
}

}  // namespace brokenstick
