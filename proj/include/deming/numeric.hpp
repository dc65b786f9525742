#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace deming {

/// Neumaier compensated accumulator. Summation order is the caller's loop
/// order, so results are reproducible for a fixed input order.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double mean(std::span<const double> v);
double median(std::vector<double> v);

// Sample variance with n-1 denominator.
double sample_variance(std::span<const double> v);

// Type-7 (linear interpolation) empirical quantile, prob in [0, 1].
double quantile(std::vector<double> v, double prob);

double student_t_quantile(double prob, double df);
double chi_square_1_sf(double statistic);

}  // namespace deming
