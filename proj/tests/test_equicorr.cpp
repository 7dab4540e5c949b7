#include "dgc/equicorr.hpp"
#include "dgc/normal.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace {

const dgc::QuadratureConfig kFine{128, 8.0, 1e-12};

TEST(Equicorr, OrthantIdentityAtOrigin) {
  const std::vector<double> z{0.0, 0.0};
  for (double rho : {0.0, 0.3, 0.5, 0.9}) {
    const double exact = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
    EXPECT_NEAR(dgc::equicorr_survival(z, {2, rho, 1.0}, kFine), exact, 1e-10) << rho;
    EXPECT_NEAR(dgc::equicorr_survival(z, {2, rho, 1.0}, {32, 8.0, 1e-9}), exact, 2e-4) << rho;
  }
}

TEST(Equicorr, SizeOneClosedForm) {
  for (double sigma : {0.3, 1.0, 2.0}) {
    for (double z : {-3.0, 0.0, 1.7, 9.0}) {
      const std::vector<double> zz{z};
      const dgc::EquicorrSpec spec{1, 0.0, sigma};
      const double y = z / sigma;
      EXPECT_NEAR(dgc::equicorr_survival(zz, spec, kFine), dgc::std_normal_survival(y), 1e-12);
      EXPECT_NEAR(dgc::equicorr_hazard_gradient(zz, 0, spec, kFine) * sigma, dgc::mills_hazard(y),
                  1e-9 * dgc::mills_hazard(y));
    }
  }
}

TEST(Equicorr, IndependentCoordinatesFactorise) {
  const std::vector<double> z{-0.4, 1.1, 2.5};
  const double sigma = 1.3;
  double product = 1.0;
  for (double v : z) product *= dgc::std_normal_survival(v / sigma);
  const auto result = dgc::equicorr_integrate(z, {3, 0.0, sigma}, kFine);
  EXPECT_NEAR(std::exp(result.log_survival), product, 1e-12);
  for (std::size_t j = 0; j < z.size(); ++j)
    EXPECT_NEAR(result.hazard[j] * sigma, dgc::mills_hazard(z[j] / sigma), 1e-9);
}

// Interior points only: a central difference of log Phi cannot resolve hazards far below
// eps |log Phi| / step, so coordinates with psi^j < 1e-4 are redrawn.
TEST(Equicorr, HazardMatchesFiniteDifferences) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-3.0, 4.0);
  std::uniform_real_distribution<double> corr(0.0, 0.9);
  std::uniform_int_distribution<int> dim(1, 5);
  const dgc::QuadratureConfig quad{32, 8.0, 1e-9};
  int tested = 0;
  for (int draw = 0; tested < 100; ++draw) {
    ASSERT_LT(draw, 10000);
    const int d = dim(rng);
    const dgc::EquicorrSpec spec{d, corr(rng), 1.0};
    std::vector<double> z(d);
    for (auto& v : z) v = coord(rng);
    const int j = draw % d;
    const double psi = dgc::equicorr_hazard_gradient(z, j, spec, quad);
    if (dgc::equicorr_hazard_gradient(z, j, spec, kFine) < 1e-4) continue;
    ++tested;
    const double step = 1e-5;
    auto log_phi = [&](double shift) {
      std::vector<double> moved = z;
      moved[j] += shift;
      return dgc::equicorr_integrate(moved, spec, kFine).log_survival;
    };
    const double fd = -(log_phi(step) - log_phi(-step)) / (2.0 * step);
    EXPECT_LT(std::abs(psi / fd - 1.0), 1e-4) << "draw " << draw;
  }
}

TEST(Equicorr, UnconstrainedCoordinatesAreDropped) {
  const dgc::EquicorrSpec spec3{3, 0.4, 1.0};
  const dgc::EquicorrSpec spec2{2, 0.4, 1.0};
  const std::vector<double> with{0.5, dgc::kNegInf, -0.2};
  const std::vector<double> without{0.5, -0.2};
  const auto a = dgc::equicorr_integrate(with, spec3, kFine);
  const auto b = dgc::equicorr_integrate(without, spec2, kFine);
  EXPECT_NEAR(a.log_survival, b.log_survival, 1e-13);
  EXPECT_EQ(a.hazard[1], 0.0);
  EXPECT_NEAR(a.hazard[0], b.hazard[0], 1e-12);
  EXPECT_NEAR(a.hazard[2], b.hazard[1], 1e-12);
}

TEST(Equicorr, SurvivalDecreasesInEachCoordinate) {
  const dgc::EquicorrSpec spec{3, 0.6, 0.8};
  std::vector<double> z{0.0, 0.5, -1.0};
  double previous = dgc::equicorr_survival(z, spec, kFine);
  for (int k = 0; k < 20; ++k) {
    z[k % 3] += 0.3;
    const double next = dgc::equicorr_survival(z, spec, kFine);
    EXPECT_LT(next, previous);
    previous = next;
  }
}

TEST(Equicorr, RefinementInvariance) {
  const dgc::EquicorrSpec spec{4, 0.7, 1.2};
  const std::vector<double> z{1.0, -0.5, 2.2, 0.3};
  const auto coarse = dgc::equicorr_integrate(z, spec, {32, 8.0, 1e-9});
  const auto fine = dgc::equicorr_integrate(z, spec, {512, 8.0, 1e-13});
  EXPECT_NEAR(coarse.log_survival, fine.log_survival, 1e-8);
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(coarse.hazard[j] / fine.hazard[j], 1.0, 1e-7);
}

TEST(Equicorr, FarTailStaysFinite) {
  const dgc::EquicorrSpec spec{3, 0.3, 0.8};
  const std::vector<double> z{17.3, -10.35, 31.6};
  const auto result = dgc::equicorr_integrate(z, spec, {32, 8.0, 1e-9});
  EXPECT_TRUE(std::isfinite(result.log_survival));
  for (double v : result.hazard) EXPECT_TRUE(std::isfinite(v));
}

TEST(Equicorr, TruncatedMomentMatchesMonteCarlo) {
  const double rho = 0.5, sigma = 1.1;
  const std::vector<double> z{0.2, -0.7, 0.9};
  const double x = 0.4;
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const int samples = 2'000'000;
  double sum = 0.0, sum_sq = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double common = normal(rng);
    double xi[3];
    bool inside = true;
    for (int l = 0; l < 3; ++l) {
      xi[l] = sigma * (std::sqrt(rho) * common + std::sqrt(1.0 - rho) * normal(rng));
      inside = inside && xi[l] > z[l];
    }
    const double value = inside ? xi[1] + x : 0.0;
    sum += value;
    sum_sq += value * value;
  }
  const double mean = sum / samples;
  const double se = std::sqrt((sum_sq / samples - mean * mean) / samples);
  const dgc::EquicorrSpec spec{3, rho, sigma};
  const double got = dgc::truncated_first_moment(z, 1, x, spec, kFine);
  EXPECT_LT(std::abs(got - mean), 4.0 * se);

  const auto pass = dgc::equicorr_integrate(z, spec, kFine);
  EXPECT_NEAR(dgc::truncated_mean_ratio(spec, pass.factor_mean, pass.hazard[1], x),
              got / std::exp(pass.log_survival), 1e-9);
}

TEST(Equicorr, InvalidSpecThrows) {
  const std::vector<double> z{0.0, 0.0};
  EXPECT_THROW(dgc::equicorr_survival(z, {2, 1.5, 1.0}, kFine), std::invalid_argument);
  EXPECT_THROW(dgc::equicorr_survival(z, {2, 0.5, -1.0}, kFine), std::invalid_argument);
  EXPECT_THROW(dgc::equicorr_survival(z, {2, 0.5, 1.0}, {0, 8.0, 1e-9}), std::invalid_argument);
}

}  // namespace
