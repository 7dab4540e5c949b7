#include "dgc/normal.hpp"

#include <boost/math/special_functions/erf.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gtest/gtest.h>

#include <cmath>

namespace {

using High = boost::multiprecision::cpp_bin_float_50;

High survival_oracle(double x) { return boost::math::erfc(High(x) / boost::multiprecision::sqrt(High(2))) / 2; }

double rel_err(double value, const High& exact) {
  return static_cast<double>(boost::multiprecision::abs((High(value) - exact) / exact));
}

// Rounding x / sqrt(2) alone costs a relative error of about x^2 ulp in the tail.
TEST(Normal, SurvivalMatchesHighPrecisionOracle) {
  for (double x = -8.0; x <= 37.0; x += 0.37)
    EXPECT_LT(rel_err(dgc::std_normal_survival(x), survival_oracle(x)), 1e-15 * (4.0 + x * x)) << x;
}

TEST(Normal, LogSurvivalMatchesHighPrecisionOracle) {
  for (double x = -30.0; x <= 200.0; x += 0.91) {
    const High exact = boost::multiprecision::log(survival_oracle(x));
    const double got = dgc::log_std_normal_survival(x);
    const double err = static_cast<double>(boost::multiprecision::abs(High(got) - exact));
    EXPECT_LT(err, 1e-13 * std::max(1.0, std::abs(got))) << x;
  }
}

TEST(Normal, MillsHazardMatchesHighPrecisionOracle) {
  for (double x = -20.0; x <= 60.0; x += 0.53) {
    const High density = boost::multiprecision::exp(-High(x) * x / 2) / boost::multiprecision::sqrt(2 * boost::math::constants::pi<High>());
    EXPECT_LT(rel_err(dgc::mills_hazard(x), density / survival_oracle(x)), 1e-12) << x;
  }
}

TEST(Normal, InversesRoundTrip) {
  for (double p : {1e-300, 1e-20, 1e-5, 0.1, 0.5, 0.9, 0.999999}) {
    const double x = dgc::std_normal_survival_inverse(p);
    EXPECT_NEAR(dgc::std_normal_survival(x) / p, 1.0, 1e-12) << p;
  }
  for (double q : {1e-300, 1e-12, 1e-4, 0.3}) {
    const double x = dgc::std_normal_survival_inverse_complement(q);
    EXPECT_LT(rel_err(x, -boost::math::erfc_inv(2 * High(q)) * boost::multiprecision::sqrt(High(2))), 1e-10) << q;
    EXPECT_NEAR(1.0 - dgc::std_normal_survival(x), q, 1e-15 + 1e-10 * q);
  }
}

TEST(Normal, ExtremeArguments) {
  EXPECT_EQ(dgc::std_normal_survival(dgc::kNegInf), 1.0);
  EXPECT_EQ(dgc::log_std_normal_survival(dgc::kNegInf), 0.0);
  EXPECT_GT(dgc::std_normal_survival(38.0), 0.0);
  EXPECT_TRUE(std::isfinite(dgc::log_std_normal_survival(1e5)));
}

}  // namespace
