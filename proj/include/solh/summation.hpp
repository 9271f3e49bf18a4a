#pragma once

#include <cmath>
#include <complex>

namespace solh {

/// Compensated (Neumaier) accumulator. Sums agree to ~1 ulp of the result
/// regardless of magnitude ordering, so reductions stay reproducible.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    // Branch-free TwoSum: the same exact rounding error as Neumaier's test.
    const double t = sum_ + v;
    const double bv = t - sum_;
    comp_ += (sum_ - (t - bv)) + (v - bv);
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
 public:
  void add(std::complex<double> v) noexcept {
    re_.add(v.real());
    im_.add(v.imag());
  }
  void add(const ComplexCompensatedSum& other) noexcept { add(other.value()); }
  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace solh
