#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace dgc {

// Compensated running sums for a sample mean and its standard error.
class MeanAccumulator {
 public:
  void add(double x) {
    add_compensated(sum_, c_sum_, x);
    add_compensated(sum_sq_, c_sum_sq_, x * x);
    ++count_;
  }

  std::size_t count() const { return count_; }
  double mean() const { return count_ ? (sum_ + c_sum_) / count_ : 0.0; }
  double variance() const {
    if (count_ < 2) return 0.0;
    const double m = mean();
    const double v = ((sum_sq_ + c_sum_sq_) - count_ * m * m) / (count_ - 1.0);
    return v > 0.0 ? v : 0.0;
  }
  double standard_error() const { return count_ < 2 ? 0.0 : std::sqrt(variance() / count_); }

 private:
  static void add_compensated(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) comp += (sum - t) + x;
    else comp += (x - t) + sum;
    sum = t;
  }

  double sum_ = 0.0, c_sum_ = 0.0;
  double sum_sq_ = 0.0, c_sum_sq_ = 0.0;
  std::size_t count_ = 0;
};

inline MeanAccumulator summarize(std::span<const double> xs) {
  MeanAccumulator acc;
  for (double x : xs) acc.add(x);
  return acc;
}

}  // namespace dgc
