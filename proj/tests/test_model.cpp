#include "dgc/errors.hpp"
#include "dgc/model.hpp"
#include "dgc/normal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace {

double survival_std(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

// Root of survival_std(x) = exp(-lambda t) by bisection.
double h_bisection(double lambda, double t) {
  const double target = std::exp(-lambda * t);
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (survival_std(mid) > target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

dgc::ModelConfig config_with(double lambda, double rho = 0.0) {
  auto c = dgc::ModelConfig::defaults();
  c.hazards.assign(3, lambda);
  c.rho_copula = rho;
  return c;
}

TEST(Model, HMatchesBisection) {
  for (double lambda : {0.001, 0.01, 0.1, 1.0}) {
    const auto c = config_with(lambda);
    for (double t : {1e-3, 0.5, 1.0, 5.0, 30.0}) EXPECT_NEAR(c.h(1, t), h_bisection(lambda, t), 1e-10) << lambda << " " << t;
  }
}

TEST(Model, HReferenceValue) {
  EXPECT_NEAR(config_with(0.1).h(1, 5.0), -0.270288020738736, 1e-12);
}

TEST(Model, HBoundaryValues) {
  const auto c = config_with(0.02);
  EXPECT_EQ(c.h(0, 0.0), dgc::kNegInf);
  EXPECT_EQ(c.h_inverse(0, dgc::kNegInf), 0.0);
  EXPECT_TRUE(std::isinf(c.h_dot(0, 0.0)));
  EXPECT_THROW(c.h(0, -1.0), std::domain_error);
}

TEST(Model, HInverseRoundTrip) {
  const auto c = config_with(0.03);
  for (double t : {1e-6, 0.1, 2.0, 50.0, 500.0}) EXPECT_NEAR(c.h_inverse(1, c.h(1, t)) / t, 1.0, 1e-10) << t;
}

TEST(Model, HDotMatchesFiniteDifferences) {
  const auto c = config_with(0.05);
  for (double t : {0.01, 0.5, 3.0, 20.0}) {
    const double step = 1e-6 * t;
    const double fd = (c.h(1, t + step) - c.h(1, t - step)) / (2.0 * step);
    EXPECT_NEAR(c.h_dot(1, t) / fd, 1.0, 1e-6) << t;
  }
}

TEST(Model, VolatilityIntegrals) {
  auto c = dgc::ModelConfig::defaults();
  c.kappa = 0.4;
  const double t0 = 0.7, t1 = 3.1;
  const int panels = 20000;
  const double width = (t1 - t0) / panels;
  double v = 0.0, v2 = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = t0 + k * width, m = a + 0.5 * width, b = a + width;
    v += width / 6.0 * (c.vol(a) + 4.0 * c.vol(m) + c.vol(b));
    v2 += width / 6.0 * (std::pow(c.vol(a), 2) + 4.0 * std::pow(c.vol(m), 2) + std::pow(c.vol(b), 2));
  }
  EXPECT_NEAR(c.vol_integral(t0, t1), v, 1e-12);
  EXPECT_NEAR(c.vol_sq_integral(t0, t1), v2, 1e-12);
  EXPECT_NEAR(c.vol(2.0) / c.alpha(2.0), std::sqrt(c.kappa), 1e-15);
  // Remaining variance from t to infinity equals alpha(t)^2.
  EXPECT_NEAR(c.vol_sq_integral(2.0, 1e6), std::pow(c.alpha(2.0), 2), 1e-15);
}

// Conditional law of an equicorrelated standard vector given k coordinates, by elimination.
struct Conditional {
  double variance;
  double covariance;
  double regression;
};

Conditional schur_oracle(int k, double rho) {
  const int d = k + 2;
  std::vector<std::vector<double>> s(d, std::vector<double>(d, rho));
  for (int i = 0; i < d; ++i) s[i][i] = 1.0;
  // Eliminate the first k coordinates.
  for (int p = 0; p < k; ++p)
    for (int i = p + 1; i < d; ++i) {
      const double f = s[i][p] / s[p][p];
      for (int j = p; j < d; ++j) s[i][j] -= f * s[p][j];
    }
  Conditional out{s[k][k], s[k][k + 1], 0.0};
  // Regression of coordinate k on the first coordinate: solve Sigma_II beta = Sigma_I,k directly.
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, rho));
  for (int i = 0; i < k; ++i) a[i][i] = 1.0;
  for (int p = 0; p < k; ++p)
    for (int i = 0; i < k; ++i) {
      if (i == p) continue;
      const double f = a[i][p] / a[p][p];
      for (int j = 0; j <= k; ++j) a[i][j] -= f * a[p][j];
    }
  if (k > 0) out.regression = a[0][k] / a[0][0];
  return out;
}

TEST(Model, CoefficientsMatchGaussianConditioning) {
  for (double rho : {0.0, 0.2, 0.5, 0.9}) {
    for (int k = 0; k <= 6; ++k) {
      const auto c = dgc::coefs(k, rho);
      const auto o = schur_oracle(k, rho);
      EXPECT_NEAR(c.sigma_I * c.sigma_I, o.variance, 1e-13);
      EXPECT_NEAR(c.rho_I, o.covariance / o.variance, 1e-13);
      if (k > 0) {
        EXPECT_NEAR(c.lambda_I, o.regression, 1e-13);
      }
      EXPECT_LE(c.sigma_I, 1.0);
    }
  }
  EXPECT_THROW(dgc::coefs(-1, 0.3), std::invalid_argument);
  EXPECT_THROW(dgc::coefs(1, 1.0), std::invalid_argument);
}

TEST(Model, ZArgumentWithoutDefaults) {
  const auto c = config_with(0.02, 0.4);
  auto s = dgc::PortfolioState::initial(c);
  s.t = 1.5;
  s.m[dgc::name_index(1)] = 0.3;
  const std::vector<int> none;
  EXPECT_NEAR(dgc::z_argument(c, s, 1, 4.0, none), (c.h(1, 4.0) - 0.3) / c.alpha(1.5), 1e-14);
}

TEST(Model, ZArgumentShiftsByResiduals) {
  const auto c = config_with(0.02, 0.4);
  auto s = dgc::PortfolioState::initial(c);
  s.t = 2.0;
  s.m = {0.1, -0.2, 0.05};
  s.add_default(c, 0, 1.0);
  const double residual = c.h(0, 1.0) + 0.2;
  EXPECT_NEAR(*s.find_default(0)->residual, residual, 1e-14);
  const std::vector<int> I{0};
  const double expected = (c.h(1, 3.0) - 0.05) / c.alpha(2.0) - dgc::coefs(1, 0.4).lambda_I * residual / c.alpha(2.0);
  EXPECT_NEAR(dgc::z_argument(c, s, 1, 3.0, I), expected, 1e-14);
}

TEST(Model, MissingResidualIsReported) {
  const auto c = config_with(0.02, 0.4);
  auto s = dgc::PortfolioState::initial(c);
  s.t = 2.0;
  s.defaults.push_back({0, 1.0, std::nullopt});
  const std::vector<int> I{0};
  EXPECT_THROW(dgc::z_argument(c, s, 1, 3.0, I), dgc::MissingResidual);
  try {
    s.validate(c);
    FAIL() << "expected ConfigError";
  } catch (const dgc::ConfigError& e) {
    EXPECT_EQ(e.field(), "defaults[0].residual");
  }
}

TEST(Model, StateValidation) {
  const auto c = config_with(0.02);
  auto s = dgc::PortfolioState::initial(c);
  s.t = 1.0;
  EXPECT_NO_THROW(s.validate(c));
  s.add_default(c, 1, 0.5);
  EXPECT_NO_THROW(s.validate(c));
  EXPECT_THROW(s.add_default(c, 1, 0.7), std::invalid_argument);
  s.defaults.push_back({0, 2.0, 0.1});
  EXPECT_THROW(s.validate(c), dgc::ConfigError);
}

TEST(Model, ConfigValidation) {
  auto c = dgc::ModelConfig::defaults();
  EXPECT_NO_THROW(c.validate());
  c.hazards.pop_back();
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = dgc::ModelConfig::defaults();
  c.rho_copula = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  EXPECT_THROW(c.hazard(2), std::out_of_range);
}

}  // namespace
