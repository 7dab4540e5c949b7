#include "dgc/appendix.hpp"

#include "dgc/errors.hpp"
#include "dgc/normal.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace dgc {
namespace {

double gamma_density(GammaFamily family, double y) {
  switch (family) {
    case GammaFamily::StandardNormal: return std_normal_density(y);
    case GammaFamily::NormalTimesQuadratic: return (1.0 + y * y) * std_normal_density(y);
  }
  return 0.0;
}

// g(y) = -Gamma'(y) / Gamma(y).
double log_slope(GammaFamily family, double y) {
  switch (family) {
    case GammaFamily::StandardNormal: return y;
    case GammaFamily::NormalTimesQuadratic: return y - 2.0 * y / (1.0 + y * y);
  }
  return 0.0;
}

// Last point of a scan over [0, y_max] where the comparison fails, or -1 if it never
// fails, or y_max if it fails at the end of the range.
double last_failure(GammaFamily family, double alpha, double y_max, bool upper) {
  constexpr int scan = 4000;
  double last = -1.0;
  for (int i = 0; i <= scan; ++i) {
    const double y = y_max * i / scan;
    const double gap = log_slope(family, y) - alpha * y;
    const double noise = 1e-12 * (1.0 + std::abs(alpha * y));
    const bool holds = upper ? gap >= -noise : gap <= noise;
    if (!holds) last = y;
  }
  return last;
}

}  // namespace

std::string to_string(GammaFamily family) {
  switch (family) {
    case GammaFamily::StandardNormal: return "normal";
    case GammaFamily::NormalTimesQuadratic: return "normal_quadratic";
  }
  return "unknown";
}

TailBoundReport tail_bound_check(int d, double alpha, double epsilon, GammaFamily family,
                                 double y_min, double y_max, int points) {
  if (d < 0 || d > 2) throw std::invalid_argument("tail_bound_check: d must be 0, 1 or 2");
  if (!(alpha > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("tail_bound_check: alpha and epsilon must be > 0");
  if (!(y_min > 0.0 && y_max > y_min) || points < 2) throw std::invalid_argument("tail_bound_check: bad grid");

  TailBoundReport r;
  r.d = d;
  r.alpha = alpha;
  r.epsilon = epsilon;
  r.family = family;
  r.upper_bound = 1.0 / alpha + epsilon;
  r.lower_bound = 1.0 / alpha - epsilon;

  const double fail_upper = last_failure(family, alpha, y_max, true);
  const double fail_lower = last_failure(family, alpha, y_max, false);
  r.upper_applicable = fail_upper < y_max;
  r.lower_applicable = fail_lower < y_max;
  const double spread = std::abs(d - 1.0);
  r.upper_threshold = std::max(std::max(fail_upper, 0.0), std::sqrt(spread * (1.0 / (epsilon * alpha * alpha) + 1.0 / alpha)));
  r.lower_threshold = std::max(std::max(fail_lower, 0.0), std::sqrt(std::max(0.0, spread * (1.0 / (epsilon * alpha * alpha) - 1.0 / alpha))));
  if (!r.upper_applicable && !r.lower_applicable)
    throw ThresholdUndefined("tail_bound_check: g(y) is not comparable to alpha*y on the tested range");

  auto integrand = [&](double t) { return std::pow(t, d) * gamma_density(family, t); };
  r.max_ratio = -std::numeric_limits<double>::infinity();
  r.min_ratio = std::numeric_limits<double>::infinity();
  bool any_upper = false, any_lower = false;
  for (int i = 0; i < points; ++i) {
    const double y = y_min + (y_max - y_min) * i / (points - 1);
    const double G = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, y, y + 40.0, 15, 1e-13);
    const double ratio = G / (std::pow(y, d - 1) * gamma_density(family, y));
    r.ys.push_back(y);
    r.ratios.push_back(ratio);
    if (r.upper_applicable && y > r.upper_threshold) {
      r.max_ratio = std::max(r.max_ratio, ratio);
      any_upper = true;
    }
    if (r.lower_applicable && y > r.lower_threshold) {
      r.min_ratio = std::min(r.min_ratio, ratio);
      any_lower = true;
    }
  }
  if (!any_upper && !any_lower)
    throw ThresholdUndefined("tail_bound_check: no grid point above the thresholds");
  r.upper_applicable = any_upper;
  r.lower_applicable = any_lower;
  r.upper_holds = !any_upper || r.max_ratio <= r.upper_bound;
  r.lower_holds = !any_lower || r.min_ratio >= r.lower_bound;
  bool rising = true, falling = true;
  for (std::size_t i = 1; i < r.ratios.size(); ++i) {
    if (r.ratios[i] < r.ratios[i - 1] * (1.0 - 1e-9)) rising = false;
    if (r.ratios[i] > r.ratios[i - 1] * (1.0 + 1e-9)) falling = false;
  }
  const double limit = 1.0 / alpha;
  r.monotone = (rising || falling) &&
               std::abs(r.ratios.back() - limit) <= std::abs(r.ratios.front() - limit) * (1.0 + 1e-9) + 1e-12;
  return r;
}

double sup_abs_bm_tail(double y, double t) {
  if (y <= 0.0) return 1.0;
  const double x = y / std::sqrt(t);
  double sum = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double term = std_normal_survival((2.0 * k + 1.0) * x);
    sum += (k % 2 == 0) ? term : -term;
    if (term < 1e-18 * std::max(sum, 1e-300)) break;
  }
  return std::clamp(4.0 * sum, 0.0, 1.0);
}

SupBmReport sup_bm_exponential_check(double q, double t, std::uint64_t sample_count,
                                     std::uint64_t seed, int steps) {
  if (!(q >= 0.0) || !(t > 0.0) || sample_count < 2 || steps < 1)
    throw std::invalid_argument("sup_bm_exponential_check: need q >= 0, t > 0, at least two samples");
  SupBmReport r;
  r.q = q;
  r.t = t;
  r.sample_count = sample_count;

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double dt = t / steps;
  const double sd = std::sqrt(dt);
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t i = 0; i < sample_count; ++i) {
    double w = 0.0, sup = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double next = w + sd * normal(gen);
      const double jump = (next - w) * (next - w);
      const double hi = 0.5 * (w + next + std::sqrt(jump - 2.0 * dt * std::log(1.0 - uniform(gen))));
      const double lo = 0.5 * (w + next - std::sqrt(jump - 2.0 * dt * std::log(1.0 - uniform(gen))));
      sup = std::max({sup, hi, -lo});
      w = next;
    }
    const double value = std::exp(q * sup * sup);
    sum += value;
    sum_sq += value * value;
  }
  const double n = static_cast<double>(sample_count);
  r.estimate = sum / n;
  r.standard_error = std::sqrt(std::max(0.0, sum_sq / n - r.estimate * r.estimate) / (n - 1.0));

  if (q == 0.0) {
    r.majorant = 1.0;
    r.exact = 1.0;
  } else {
    // E = 1 + 2q int_0^inf y R(y) e^{q y^2} dy, with R replaced by min(1, 4 Phi(y / (2 sqrt t))) for the majorant.
    const double decay_exact = 1.0 / (2.0 * t) - q;
    const double decay_bound = 1.0 / (8.0 * t) - q;
    auto integrate = [&](auto&& tail, double decay) {
      if (!(decay > 0.0)) return std::numeric_limits<double>::infinity();
      const double upper = std::sqrt(80.0 / decay) + 4.0 * std::sqrt(t);
      auto f = [&](double y) { return y * tail(y) * std::exp(q * y * y); };
      return 1.0 + 2.0 * q * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, upper, 20, 1e-13);
    };
    r.exact = integrate([&](double y) { return sup_abs_bm_tail(y, t); }, decay_exact);
    r.majorant = integrate([&](double y) { return std::min(1.0, 4.0 * std_normal_survival(y / (2.0 * std::sqrt(t)))); }, decay_bound);
  }
  r.pass = std::isfinite(r.estimate) && r.estimate <= r.majorant;
  return r;
}

EnvelopeReport affine_envelope_check(const EquicorrSpec& spec, const QuadratureConfig& quad,
                                     std::uint64_t seed, int points_per_level) {
  spec.validate();
  EnvelopeReport r;
  r.spec = spec;
  const int d = spec.size;
  auto norm_inf = [](const std::vector<double>& z) {
    double m = 0.0;
    for (double v : z) m = std::max(m, std::abs(v));
    return m;
  };

  // Reference lattice of spacing 1 on [-8, 8]^d (coarser in higher dimension).
  const int half = 8;
  const int stride = d <= 3 ? 1 : 2;
  std::vector<int> counter(d, -half);
  std::vector<double> z(d);
  double a = 0.0, b = 0.0;
  for (;;) {
    for (int l = 0; l < d; ++l) z[l] = counter[l];
    const FactorIntegral fi = equicorr_integrate(z, spec, quad);
    const double norm = norm_inf(z);
    for (double psi : fi.hazard) {
      if (norm <= 1.0) a = std::max(a, psi);
      else b = std::max(b, psi / norm);
    }
    int l = 0;
    while (l < d && (counter[l] += stride) > half) counter[l++] = -half;
    if (l == d) break;
  }
  r.a = a;
  r.b = b;

  std::mt19937_64 gen(seed);
  r.worst_excess = -std::numeric_limits<double>::infinity();
  for (double width : {4.0, 8.0, 16.0, 32.0}) {
    std::uniform_real_distribution<double> uniform(-width, width);
    double sup = 0.0;
    for (int p = 0; p < points_per_level; ++p) {
      for (int l = 0; l < d; ++l) z[l] = uniform(gen);
      // Include the corner directions that drive the linear growth.
      if (p < d) {
        std::fill(z.begin(), z.end(), -width);
        z[p] = width;
      }
      const FactorIntegral fi = equicorr_integrate(z, spec, quad);
      const double norm = norm_inf(z);
      for (double psi : fi.hazard) {
        sup = std::max(sup, psi / (1.0 + norm));
        if (width <= 8.0) r.worst_excess = std::max(r.worst_excess, psi - (a + b * norm));
      }
    }
    r.halfwidths.push_back(width);
    r.sups.push_back(sup);
  }
  for (std::size_t i = 1; i < r.sups.size(); ++i) r.ratios.push_back(r.sups[i] / r.sups[i - 1]);
  r.envelope_holds = r.worst_excess <= 0.0;
  r.stable = std::all_of(r.ratios.begin(), r.ratios.end(), [](double x) { return x < 1.1; });
  return r;
}

}  // namespace dgc
