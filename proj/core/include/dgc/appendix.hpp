#pragma once

#include "dgc/equicorr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace dgc {

// Densities for the tail-ratio check: phi(y) and (1 + y^2) phi(y).
enum class GammaFamily { StandardNormal, NormalTimesQuadratic };

std::string to_string(GammaFamily family);

struct TailBoundReport {
  int d = 0;
  double alpha = 1.0;
  double epsilon = 1.0;
  GammaFamily family = GammaFamily::StandardNormal;
  std::vector<double> ys;
  std::vector<double> ratios;  // G(y) / (y^{d-1} Gamma(y))
  bool upper_applicable = false;  // g(y) >= alpha y beyond some point of the range
  bool lower_applicable = false;  // g(y) <= alpha y beyond some point of the range
  double upper_threshold = 0.0;
  double lower_threshold = 0.0;
  double max_ratio = 0.0;  // over grid points above upper_threshold
  double min_ratio = 0.0;  // over grid points above lower_threshold
  double upper_bound = 0.0;  // 1/alpha + epsilon
  double lower_bound = 0.0;  // 1/alpha - epsilon
  bool upper_holds = true;
  bool lower_holds = true;
  bool monotone = true;  // ratios move monotonically towards 1/alpha, up to 1e-9 relative noise
};

// Evaluates G(y) = int_y^inf t^d Gamma(t) dt by adaptive Gauss-Kronrod on [y_min, y_max]
// and checks the two-sided tail ratio bounds. Throws ThresholdUndefined if neither
// comparison of g(y) = -Gamma'/Gamma with alpha y holds on the range.
TailBoundReport tail_bound_check(int d, double alpha, double epsilon, GammaFamily family,
                                 double y_min = 2.0, double y_max = 8.0, int points = 121);

struct SupBmReport {
  double q = 0.0;
  double t = 0.0;
  std::uint64_t sample_count = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double majorant = 0.0;  // from the reflection bound, infinite when 8qt >= 1
  double exact = 0.0;     // quadrature of the exact law of the running maximum of |W|
  bool pass = false;      // estimate finite and below the majorant
};

// P(sup_{s<=t} |W_s| > y) from the alternating image series.
double sup_abs_bm_tail(double y, double t);

// E[exp(q sup_{s<=t} W_s^2)] by Monte Carlo with Brownian-bridge corrected running extrema.
SupBmReport sup_bm_exponential_check(double q, double t, std::uint64_t sample_count,
                                     std::uint64_t seed, int steps = 64);

struct EnvelopeReport {
  EquicorrSpec spec;
  double a = 0.0;  // intercept fitted on the reference lattice
  double b = 0.0;  // slope fitted on the reference lattice
  double worst_excess = 0.0;  // max over random points of psi - (a + b |z|_inf)
  std::vector<double> halfwidths;
  std::vector<double> sups;    // sup of psi^j / (1 + |z|_inf) over random points in [-L, L]^d
  std::vector<double> ratios;  // successive ratios of sups
  bool envelope_holds = false;
  bool stable = false;  // every ratio below 1.1
};

// Fits psi^j <= a + b |z|_inf on a lattice of halfwidth 8 and tests it on random points.
EnvelopeReport affine_envelope_check(const EquicorrSpec& spec, const QuadratureConfig& quad,
                                     std::uint64_t seed, int points_per_level = 200);

}  // namespace dgc
