#include "dgc/model.hpp"

#include "dgc/errors.hpp"
#include "dgc/normal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dgc {

ModelConfig ModelConfig::defaults() {
  ModelConfig c;
  c.n = 1;
  c.rho_copula = 0.0;
  c.kappa = 0.25;
  c.hazards.assign(3, 0.01);
  return c;
}

double ModelConfig::hazard(int name) const {
  if (name < kBank || name > n) throw std::out_of_range("unknown name " + std::to_string(name));
  return hazards[name_index(name)];
}

void ModelConfig::validate() const {
  if (n < 1) throw std::invalid_argument("ModelConfig: n must be >= 1");
  if (!(rho_copula >= 0.0 && rho_copula < 1.0))
    throw std::invalid_argument("ModelConfig: rho_copula must lie in [0,1)");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("ModelConfig: kappa must be > 0");
  if (static_cast<int>(hazards.size()) != name_count())
    throw std::invalid_argument("ModelConfig: expected " + std::to_string(name_count()) + " hazards");
  for (std::size_t i = 0; i < hazards.size(); ++i)
    if (!(hazards[i] > 0.0) || !std::isfinite(hazards[i]))
      throw std::invalid_argument("ModelConfig: hazard of name " + std::to_string(index_name(static_cast<int>(i))) +
                                  " must be > 0");
}

double ModelConfig::vol(double t) const { return std::sqrt(kappa) * std::exp(-0.5 * kappa * t); }

double ModelConfig::alpha(double t) const { return std::exp(-0.5 * kappa * t); }

double ModelConfig::vol_integral(double t0, double t1) const {
  // (2/sqrt(kappa)) (e^{-kappa t0/2} - e^{-kappa t1/2})
  return 2.0 / std::sqrt(kappa) * std::exp(-0.5 * kappa * t0) * -std::expm1(-0.5 * kappa * (t1 - t0));
}

double ModelConfig::vol_sq_integral(double t0, double t1) const {
  return std::exp(-kappa * t0) * -std::expm1(-kappa * (t1 - t0));
}

double ModelConfig::h(int name, double t) const {
  if (t < 0.0) throw std::domain_error("h: negative time");
  if (t == 0.0) return kNegInf;
  if (std::isinf(t)) return std::numeric_limits<double>::infinity();
  const double q = -std::expm1(-hazard(name) * t);
  if (q <= 0.5) return std_normal_survival_inverse_complement(q);
  return std_normal_survival_inverse(std::exp(-hazard(name) * t));
}

double ModelConfig::h_inverse(int name, double x) const {
  if (x == kNegInf) return 0.0;
  return -log_std_normal_survival(x) / hazard(name);
}

double ModelConfig::h_dot(int name, double t) const {
  const double lambda = hazard(name);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  return lambda * std::exp(-lambda * t) / std_normal_density(h(name, t));
}

CoefSet coefs(int I_size, double rho_copula) {
  if (I_size < 0) throw std::invalid_argument("coefs: negative set size");
  if (!(rho_copula >= 0.0 && rho_copula < 1.0)) throw std::invalid_argument("coefs: rho_copula outside [0,1)");
  const double r = rho_copula;
  const double k = I_size;
  CoefSet c;
  c.rho_I = r / (k * r + 1.0);
  c.sigma_I = std::sqrt((1.0 - r) * (k * r + 1.0) / (k * r + 1.0 - r));
  c.lambda_I = r / ((k - 1.0) * r + 1.0);
  return c;
}

PortfolioState PortfolioState::initial(const ModelConfig& config) {
  PortfolioState s;
  s.m.assign(config.name_count(), 0.0);
  return s;
}

const DefaultRecord* PortfolioState::find_default(int name) const {
  for (const auto& d : defaults)
    if (d.name == name) return &d;
  return nullptr;
}

bool PortfolioState::is_defaulted(int name) const { return find_default(name) != nullptr; }

void PortfolioState::add_default(const ModelConfig& config, int name, double tau) {
  if (is_defaulted(name)) throw std::invalid_argument("add_default: name " + std::to_string(name) + " already defaulted");
  defaults.push_back({name, tau, config.h(name, tau) - m_of(name)});
}

void PortfolioState::refresh_residuals(const ModelConfig& config) {
  for (auto& d : defaults) d.residual = config.h(d.name, d.tau) - m_of(d.name);
}

void PortfolioState::validate(const ModelConfig& config) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t", 0, "time must be finite and >= 0");
  if (static_cast<int>(m.size()) != config.name_count())
    throw ConfigError("m", 0, "expected one running integral per name");
  for (double v : m)
    if (!std::isfinite(v)) throw ConfigError("m", 0, "running integrals must be finite");
  for (std::size_t a = 0; a < defaults.size(); ++a) {
    const auto& d = defaults[a];
    const std::string field = "defaults[" + std::to_string(a) + "]";
    if (d.name < kBank || d.name > config.n) throw ConfigError(field + ".name", 0, "unknown name");
    if (!(d.tau > 0.0 && d.tau <= t)) throw ConfigError(field + ".tau", 0, "default time must lie in (0, t]");
    if (!d.residual) throw ConfigError(field + ".residual", 0, "defaulted name " + std::to_string(d.name) + " has no residual");
    for (std::size_t b = 0; b < a; ++b) {
      if (defaults[b].name == d.name) throw ConfigError(field + ".name", 0, "name defaulted twice");
      if (defaults[b].tau == d.tau) throw ConfigError(field + ".tau", 0, "default times must be distinct");
    }
  }
}

double z_argument(const ModelConfig& config, const PortfolioState& state, int j, double u,
                  std::span<const int> I) {
  const double a = config.alpha(state.t);
  const double hu = config.h(j, u);
  if (hu == kNegInf) return kNegInf;
  double residual_sum = 0.0;
  for (int i : I) {
    const DefaultRecord* d = state.find_default(i);
    if (d == nullptr || !d->residual)
      throw MissingResidual("z_argument: name " + std::to_string(i) + " has no residual");
    residual_sum += *d->residual;
  }
  const double lambda = coefs(static_cast<int>(I.size()), config.rho_copula).lambda_I;
  return (hu - state.m_of(j)) / a - lambda * residual_sum / a;
}

}  // namespace dgc
