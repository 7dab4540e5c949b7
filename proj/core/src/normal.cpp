#include "dgc/normal.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <stdexcept>

namespace dgc {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kContinuedFractionSwitch = 10.0;

// Laplace continued fraction psi(x) = x + 1/(x + 2/(x + 3/(x + ...))), evaluated backwards.
double mills_continued_fraction(double x) {
  double t = x;
  for (int k = 60; k >= 1; --k) t = x + k / t;
  return t;
}

}  // namespace

double std_normal_density(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_survival(double x) {
  if (std::isnan(x)) return x;
  if (x < 37.0) return 0.5 * std::erfc(x * kInvSqrt2);
  return std::exp(log_std_normal_survival(x));
}

double log_std_normal_survival(double x) {
  if (std::isnan(x)) return x;
  if (x == kNegInf) return 0.0;
  if (x < -5.0) return std::log1p(-0.5 * std::erfc(-x * kInvSqrt2));
  if (x < kContinuedFractionSwitch) return std::log(0.5 * std::erfc(x * kInvSqrt2));
  if (std::isinf(x)) return kNegInf;
  return -0.5 * x * x - kLogSqrt2Pi - std::log(mills_continued_fraction(x));
}

double mills_hazard(double y) {
  if (y < kContinuedFractionSwitch) return std_normal_density(y) / (0.5 * std::erfc(y * kInvSqrt2));
  return mills_continued_fraction(y);
}

double std_normal_survival_inverse(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("std_normal_survival_inverse: p outside [0,1]");
  if (p == 0.0) return std::numeric_limits<double>::infinity();
  if (p == 1.0) return kNegInf;
  if (p > 0.5) return std_normal_survival_inverse_complement(1.0 - p);
  return kSqrt2 * boost::math::erfc_inv(2.0 * p);
}

double std_normal_survival_inverse_complement(double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("std_normal_survival_inverse_complement: q outside [0,1]");
  if (q == 0.0) return kNegInf;
  if (q == 1.0) return std::numeric_limits<double>::infinity();
  if (q > 0.5) return std_normal_survival_inverse(1.0 - q);
  return -kSqrt2 * boost::math::erfc_inv(2.0 * q);
}

}  // namespace dgc
