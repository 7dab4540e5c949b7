#include "dgc/appendix.hpp"
#include "dgc/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

namespace {

double density(double y) { return std::exp(-0.5 * y * y) / std::sqrt(2.0 * std::numbers::pi); }
double survival(double y) { return 0.5 * std::erfc(y / std::sqrt(2.0)); }

// Eigenfunction expansion of P(sup_{s<=t} |W_s| < y).
double sup_abs_below(double y, double t) {
  double sum = 0.0;
  for (int n = 0; n < 200; ++n) {
    const double k = 2.0 * n + 1.0;
    sum += (n % 2 == 0 ? 1.0 : -1.0) / k * std::exp(-k * k * std::numbers::pi * std::numbers::pi * t / (8.0 * y * y));
  }
  return 4.0 / std::numbers::pi * sum;
}

TEST(Appendix, NormalTailRatiosMatchClosedForms) {
  for (int d = 0; d <= 2; ++d) {
    const auto r = dgc::tail_bound_check(d, 1.0, 0.5, dgc::GammaFamily::StandardNormal);
    ASSERT_EQ(r.ys.size(), r.ratios.size());
    for (std::size_t k = 0; k < r.ys.size(); ++k) {
      const double y = r.ys[k];
      double tail = 0.0;
      if (d == 0) tail = survival(y);
      if (d == 1) tail = density(y);
      if (d == 2) tail = y * density(y) + survival(y);
      EXPECT_NEAR(r.ratios[k], tail / (std::pow(y, d - 1) * density(y)), 1e-9) << d << " " << y;
    }
  }
}

TEST(Appendix, TailBoundsHoldOnRange) {
  for (int d : {0, 1, 2}) {
    const auto r = dgc::tail_bound_check(d, 1.0, 0.5, dgc::GammaFamily::StandardNormal);
    EXPECT_TRUE(r.upper_holds) << d;
    EXPECT_TRUE(r.lower_holds) << d;
    EXPECT_TRUE(r.monotone) << d;
  }
  const auto q = dgc::tail_bound_check(1, 0.9, 0.5, dgc::GammaFamily::NormalTimesQuadratic);
  EXPECT_TRUE(q.upper_applicable);
  EXPECT_TRUE(q.upper_holds);
  EXPECT_TRUE(q.lower_holds);
}

TEST(Appendix, TinyEpsilonLeavesNoUsablePoint) {
  EXPECT_THROW(dgc::tail_bound_check(2, 1.0, 1e-6, dgc::GammaFamily::StandardNormal), dgc::ThresholdUndefined);
  EXPECT_THROW(dgc::tail_bound_check(3, 1.0, 0.5, dgc::GammaFamily::StandardNormal), std::invalid_argument);
}

TEST(Appendix, SupAbsTailMatchesEigenExpansion) {
  for (double t : {0.05, 1.0, 3.0})
    for (double y : {0.3, 1.0, 2.5})
      EXPECT_NEAR(dgc::sup_abs_bm_tail(y, t), 1.0 - sup_abs_below(y, t), 1e-10) << y << " " << t;
}

TEST(Appendix, ZeroExponentGivesOne) {
  const auto r = dgc::sup_bm_exponential_check(0.0, 1.0, 1000, 3);
  EXPECT_DOUBLE_EQ(r.estimate, 1.0);
  EXPECT_TRUE(r.pass);
}

TEST(Appendix, ExponentialMomentMatchesExactLaw) {
  const auto r = dgc::sup_bm_exponential_check(1.0, 0.05, 100000, 11);
  EXPECT_TRUE(r.pass);
  EXPECT_LT(std::abs(r.estimate - r.exact), 3.0 * r.standard_error);
  EXPECT_LE(r.exact, r.majorant);
}

TEST(Appendix, AffineEnvelope) {
  const auto r = dgc::affine_envelope_check({2, 0.5, 1.0}, {32, 8.0, 1e-9}, 5, 100);
  EXPECT_TRUE(r.envelope_holds);
  EXPECT_TRUE(r.stable);
  EXPECT_GT(r.b, 0.0);
}

}  // namespace
