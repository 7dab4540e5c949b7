#include "dgc/equicorr.hpp"

#include "dgc/errors.hpp"
#include "dgc/normal.hpp"

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dgc {
namespace {

using Buffer = boost::container::small_vector<double, 16>;
using IndexBuffer = boost::container::small_vector<int, 16>;

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;
constexpr double kLinearSpaceFloor = -600.0;
// Raw products below this lose precision towards the subnormal range; such nodes are redone in log space.
constexpr double kLinearProductFloor = 1e-280;
constexpr double kNodeCutoff = 1e-12;
constexpr int kMaxRefinements = 8;
// Hard bound on the distance from the mode, far beyond where the Gaussian factor underflows.
constexpr double kWalkLimit = 80.0;

// Integrand of the factor representation, relative to its value at the mode.
// Coordinates l have conditioned argument x_l(y) = c_l - a y.
struct Integrand {
  const Buffer& c;
  double a;
  double mode;
  double log_product_at_mode;
  bool linear;

  // Returns g(y) and fills psi with psi(x_l(y)).
  double operator()(double y, double* psi) const {
    const std::size_t d = c.size();
    const double gauss = -0.5 * (y * y - mode * mode);
    if (linear) {
      double product = 1.0;
      for (std::size_t l = 0; l < d; ++l) {
        const double x = c[l] - a * y;
        const double density = kInvSqrt2Pi * std::exp(-0.5 * x * x);
        double tail;
        if (x < 10.0) {
          tail = 0.5 * std::erfc(x * kInvSqrt2);
          psi[l] = density / tail;
        } else {
          psi[l] = mills_hazard(x);
          tail = density / psi[l];
        }
        product *= tail;
      }
      if (product > kLinearProductFloor) return std::exp(gauss - log_product_at_mode) * product;
    }
    double log_product = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      const double x = c[l] - a * y;
      log_product += log_std_normal_survival(x);
      psi[l] = mills_hazard(x);
    }
    return std::exp(gauss + log_product - log_product_at_mode);
  }

  // log g(y) + log psi(x_l(y)) per coordinate, free of underflow.
  void log_weighted(double y, double* out) const {
    const std::size_t d = c.size();
    double log_value = -0.5 * (y * y - mode * mode) - log_product_at_mode;
    for (std::size_t l = 0; l < d; ++l) {
      const double x = c[l] - a * y;
      out[l] = log_std_normal_survival(x);
      log_value += out[l];
    }
    for (std::size_t l = 0; l < d; ++l) {
      const double x = c[l] - a * y;
      out[l] = log_value - 0.5 * x * x - kLogSqrt2Pi - out[l];
    }
  }
};

struct Sums {
  double mass = 0.0;
  double first = 0.0;
  Buffer psi;
};

double relative_gap(double fine, double coarse) {
  const double scale = std::max(std::abs(fine), std::abs(coarse));
  if (scale == 0.0) return 0.0;
  return std::abs(fine - coarse) / scale;
}

// Largest node values seen so far of the mass integrand and of each psi-weighted integrand.
struct Peaks {
  double mass = 0.0;
  Buffer psi;
};

// Sum over lattice points mode + (offset + stride k) h, walking outwards until the mass and
// every psi-weighted integrand are decreasing and negligible against their peaks. All of them
// are log-concave, so the remaining tails are bounded by the last visited nodes. Once the mass
// is negligible the decrease is judged in log space, where underflowed integrands keep their shape.
void walk(const Integrand& g, double h, int offset, int stride, double limit, double cutoff,
          Sums& sums, Peaks& peaks, Buffer& psi) {
  const std::size_t d = g.c.size();
  Buffer log_weighted(d);
  Buffer previous(d);
  bool have_previous = false;
  auto visit = [&](double y) {
    const double value = g(y, psi.data());
    sums.mass += value;
    sums.first += value * y;
    peaks.mass = std::max(peaks.mass, value);
    bool negligible = value < cutoff * peaks.mass;
    for (std::size_t l = 0; l < d; ++l) {
      const double weighted = value * psi[l];
      sums.psi[l] += weighted;
      peaks.psi[l] = std::max(peaks.psi[l], weighted);
      negligible = negligible && weighted <= cutoff * peaks.psi[l];
    }
    if (!negligible) {
      have_previous = false;
      return false;
    }
    g.log_weighted(y, log_weighted.data());
    bool decreasing = have_previous;
    for (std::size_t l = 0; l < d && decreasing; ++l) decreasing = log_weighted[l] < previous[l];
    previous = log_weighted;
    have_previous = true;
    return decreasing;
  };
  for (int direction : {1, -1}) {
    have_previous = false;
    int k = (direction == 1) ? offset : offset - stride;
    if (direction == -1 && offset == 0) k = -stride;
    for (;; k += direction * stride) {
      const double u = k * h;
      if (std::abs(u) > limit) break;
      if (visit(g.mode + u) && k != 0) break;
    }
  }
}

}  // namespace

void EquicorrSpec::validate() const {
  if (size < 1) throw std::invalid_argument("EquicorrSpec: size must be >= 1");
  if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("EquicorrSpec: rho must lie in [0,1)");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("EquicorrSpec: sigma must be > 0");
}

void QuadratureConfig::validate() const {
  if (node_count < 16) throw std::invalid_argument("QuadratureConfig: node_count must be >= 16");
  if (!(domain_halfwidth >= 6.0)) throw std::invalid_argument("QuadratureConfig: domain_halfwidth must be >= 6");
  if (!(refinement_tolerance > 0.0)) throw std::invalid_argument("QuadratureConfig: refinement_tolerance must be > 0");
}

void equicorr_integrate(std::span<const double> z, const EquicorrSpec& spec,
                        const QuadratureConfig& quad, double& log_survival,
                        double& factor_mean, std::span<double> hazard) {
  spec.validate();
  quad.validate();
  if (static_cast<int>(z.size()) != spec.size)
    throw std::invalid_argument("equicorr: argument length " + std::to_string(z.size()) +
                                " does not match spec size " + std::to_string(spec.size));
  if (hazard.size() != z.size()) throw std::invalid_argument("equicorr: hazard buffer has wrong length");
  std::fill(hazard.begin(), hazard.end(), 0.0);

  Buffer active;
  IndexBuffer index;
  for (std::size_t l = 0; l < z.size(); ++l) {
    if (z[l] == kNegInf) continue;
    if (!std::isfinite(z[l])) throw std::domain_error("equicorr: arguments must be finite or -infinity");
    active.push_back(z[l]);
    index.push_back(static_cast<int>(l));
  }
  const std::size_t d = active.size();
  log_survival = 0.0;
  factor_mean = 0.0;
  if (d == 0) return;

  const double sigma = spec.sigma;
  const double rho = spec.rho;
  if (rho == 0.0 || d == 1) {
    double psi_sum = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      const double u = active[l] / sigma;
      log_survival += log_std_normal_survival(u);
      hazard[index[l]] = mills_hazard(u) / sigma;
      psi_sum += hazard[index[l]];
    }
    factor_mean = sigma * std::sqrt(rho) * psi_sum;
    return;
  }

  const double s = sigma * std::sqrt(1.0 - rho);
  const double a = std::sqrt(rho / (1.0 - rho));
  Buffer c(d);
  for (std::size_t l = 0; l < d; ++l) c[l] = active[l] / s;

  // Mode of the strictly log-concave integrand by bracketed Newton iteration.
  auto slope = [&](double y, double& curvature) {
    double drift = 0.0;
    double bend = 0.0;
    for (std::size_t l = 0; l < d; ++l) {
      const double x = c[l] - a * y;
      const double p = mills_hazard(x);
      drift += p;
      bend += p * (p - x);
    }
    curvature = -1.0 - a * a * bend;
    return -y + a * drift;
  };
  double curvature = -1.0;
  double y = 0.0;
  double lo = 0.0;
  double hi = slope(0.0, curvature);
  if (hi > 0.0) {
    for (int iter = 0; iter < 200; ++iter) {
      const double f1 = slope(y, curvature);
      if (f1 > 0.0) lo = std::max(lo, y); else hi = std::min(hi, y);
      double next = y - f1 / curvature;
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const bool done = std::abs(next - y) <= 1e-12 * (1.0 + std::abs(y)) || hi - lo <= 1e-14 * (1.0 + std::abs(y));
      y = next;
      if (done) break;
    }
  }
  slope(y, curvature);
  const double mode = y;

  double log_product_at_mode = 0.0;
  for (std::size_t l = 0; l < d; ++l) log_product_at_mode += log_std_normal_survival(c[l] - a * mode);
  const Integrand g{c, a, mode, log_product_at_mode, log_product_at_mode > kLinearSpaceFloor};

  // Spacing scaled to the sharpest integrand (psi-weighted ones carry extra curvature a^2).
  const double local_sd = 1.0 / std::sqrt(-curvature + a * a);
  double h = 2.0 * quad.domain_halfwidth * local_sd / quad.node_count;

  // Nodes below this relative size are dropped; log-concavity bounds the remaining tail.
  const double cutoff = std::min(kNodeCutoff, 1e-3 * quad.refinement_tolerance);
  Buffer psi(d);
  Sums coarse;
  coarse.psi.assign(d, 0.0);
  Peaks peaks;
  peaks.psi.assign(d, 0.0);
  walk(g, 2.0 * h, 0, 1, kWalkLimit, cutoff, coarse, peaks, psi);
  double coarse_step = 2.0 * h;

  // The trapezoid error on an analytic integrand squares when the spacing halves, so a
  // coarse/fine gap of sqrt(tolerance) bounds the error of the fine level by the tolerance.
  const double gap_limit = std::sqrt(quad.refinement_tolerance);
  for (int level = 0; level <= kMaxRefinements; ++level) {
    Sums fine = coarse;
    walk(g, h, 1, 2, kWalkLimit, cutoff, fine, peaks, psi);
    bool converged = relative_gap(fine.mass * h, coarse.mass * coarse_step) <= gap_limit;
    for (std::size_t l = 0; l < d && converged; ++l)
      converged = relative_gap(fine.psi[l] * h, coarse.psi[l] * coarse_step) <= gap_limit;
    if (converged) {
      const double first_gap = std::abs(fine.first / fine.mass - coarse.first / coarse.mass);
      converged = first_gap <= gap_limit * (1.0 + std::abs(fine.first / fine.mass));
    }
    if (converged) {
      log_survival = std::log(fine.mass * h) - 0.5 * mode * mode - kLogSqrt2Pi + log_product_at_mode;
      factor_mean = fine.first / fine.mass;
      for (std::size_t l = 0; l < d; ++l) hazard[index[l]] = fine.psi[l] / (fine.mass * s);
      return;
    }
    coarse = std::move(fine);
    coarse_step = h;
    h *= 0.5;
  }
  std::ostringstream msg;
  msg << std::setprecision(17) << "equicorr: quadrature did not reach tolerance " << quad.refinement_tolerance
      << " after " << kMaxRefinements << " refinements (rho " << rho << ", sigma " << sigma << ", z";
  for (double v : z) msg << ' ' << v;
  msg << ')';
  throw NonConvergence(msg.str());
}

FactorIntegral equicorr_integrate(std::span<const double> z, const EquicorrSpec& spec,
                                  const QuadratureConfig& quad) {
  FactorIntegral out;
  out.hazard.assign(z.size(), 0.0);
  equicorr_integrate(z, spec, quad, out.log_survival, out.factor_mean, out.hazard);
  return out;
}

double equicorr_survival(std::span<const double> z, const EquicorrSpec& spec,
                         const QuadratureConfig& quad) {
  return std::exp(equicorr_integrate(z, spec, quad).log_survival);
}

double equicorr_hazard_gradient(std::span<const double> z, int j, const EquicorrSpec& spec,
                                const QuadratureConfig& quad) {
  if (j < 0 || j >= static_cast<int>(z.size())) throw std::out_of_range("equicorr_hazard_gradient: index");
  if (z[j] == kNegInf) throw std::domain_error("equicorr_hazard_gradient: coordinate must be finite");
  return equicorr_integrate(z, spec, quad).hazard[j];
}

double truncated_mean_ratio(const EquicorrSpec& spec, double factor_mean, double hazard_k,
                            double x) {
  const double common = spec.sigma * std::sqrt(spec.rho);
  const double idio_var = spec.sigma * spec.sigma * (1.0 - spec.rho);
  return common * factor_mean + idio_var * hazard_k + x;
}

double truncated_first_moment(std::span<const double> z, int k, double x,
                              const EquicorrSpec& spec, const QuadratureConfig& quad) {
  if (k < 0 || k >= static_cast<int>(z.size())) throw std::out_of_range("truncated_first_moment: index");
  const FactorIntegral r = equicorr_integrate(z, spec, quad);
  return std::exp(r.log_survival) * truncated_mean_ratio(spec, r.factor_mean, r.hazard[k], x);
}

}  // namespace dgc
