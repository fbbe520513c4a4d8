#ifndef BROKENSTICK_SRC_NUMERIC_UTIL_H_
#define BROKENSTICK_SRC_NUMERIC_UTIL_H_

#include <cmath>

namespace brokenstick::detail {

// Neumaier's variant of Kahan summation.
template <typename Real = double>
class NeumaierSum {
 public:
  void add(Real v) {
    const Real t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      compensation_ += (sum_ - t) + v;
    } else {
      compensation_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  Real value() const { return sum_ + compensation_; }

 private:
  Real sum_ = 0;
  Real compensation_ = 0;
};

}  // namespace brokenstick::detail

#endif  // BROKENSTICK_SRC_NUMERIC_UTIL_H_
