#pragma once

#include <cmath>

namespace durr {

/// Neumaier's variant of Kahan summation. Order of additions is the caller's,
/// so repeated runs over the same sequence are bit-identical.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double term) noexcept {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term)) {
      compensation_ += (sum_ - t) + term;
    } else {
      compensation_ += (term - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

}  // namespace durr
