#include "dgc/intensity.hpp"

#include "dgc/errors.hpp"
#include "dgc/normal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dgc {

bool SetEval::is_alive(int name) const {
  return std::find(alive.begin(), alive.end(), name) != alive.end();
}

double SetEval::hazard_of(int name) const {
  for (std::size_t a = 0; a < alive.size(); ++a)
    if (alive[a] == name) return hazard[a];
  return 0.0;
}

IntensityEngine::IntensityEngine(ModelConfig config, QuadratureConfig quad)
    : config_(std::move(config)), quad_(quad) {
  config_.validate();
  quad_.validate();
}

void IntensityEngine::sets(const PortfolioState& state, SetKind kind, std::vector<int>& alive,
                           std::vector<int>& I) const {
  alive.clear();
  I.clear();
  for (int name = kBank; name <= config_.n; ++name) {
    const DefaultRecord* d = state.find_default(name);
    const bool defaulted = d != nullptr && d->tau <= state.t;
    const bool reference = name >= 1;
    if (kind == SetKind::G || reference) {
      (defaulted ? I : alive).push_back(name);
    } else if (kind == SetKind::FTilde) {
      alive.push_back(name);
    }
  }
}

SetEval IntensityEngine::evaluate(const PortfolioState& state, std::span<const int> alive,
                                  std::span<const int> I) const {
  SetEval e;
  e.t = state.t;
  e.alpha = config_.alpha(state.t);
  e.vol = config_.vol(state.t);
  e.alive.assign(alive.begin(), alive.end());
  e.I.assign(I.begin(), I.end());
  e.coef = coefs(static_cast<int>(I.size()), config_.rho_copula);
  e.spec = EquicorrSpec{std::max<int>(1, static_cast<int>(alive.size())), e.coef.rho_I, e.coef.sigma_I};
  double residual_sum = 0.0;
  for (int i : I) {
    const DefaultRecord* d = state.find_default(i);
    if (d == nullptr || !d->residual)
      throw MissingResidual("defaults: name " + std::to_string(i) + " has no residual");
    residual_sum += *d->residual;
  }
  e.shift = e.coef.lambda_I * residual_sum / e.alpha;
  e.z.resize(alive.size());
  for (std::size_t a = 0; a < alive.size(); ++a) {
    const double h = config_.h(alive[a], state.t);
    e.z[a] = (h == kNegInf) ? kNegInf : (h - state.m_of(alive[a])) / e.alpha - e.shift;
  }
  e.hazard.assign(alive.size(), 0.0);
  if (!alive.empty()) equicorr_integrate(e.z, e.spec, quad_, e.log_survival, e.factor_mean, e.hazard);
  return e;
}

SetEval IntensityEngine::evaluate(const PortfolioState& state, SetKind kind) const {
  std::vector<int> alive, I;
  sets(state, kind, alive, I);
  return evaluate(state, alive, I);
}

double IntensityEngine::gamma_from(const SetEval& eval, int j) const {
  if (!eval.is_alive(j)) return 0.0;
  if (eval.t == 0.0) return config_.hazard(j);
  return config_.h_dot(j, eval.t) / eval.alpha * eval.hazard_of(j);
}

double IntensityEngine::beta_from(const PortfolioState& state, const SetEval& eval, int k) const {
  const double scale = eval.vol / eval.alpha;
  if (std::find(eval.I.begin(), eval.I.end(), k) != eval.I.end()) {
    const DefaultRecord* d = state.find_default(k);
    if (d == nullptr || !d->residual) throw MissingResidual("defaults: name " + std::to_string(k) + " has no residual");
    return scale * (*d->residual / eval.alpha);
  }
  return scale * truncated_mean_ratio(eval.spec, eval.factor_mean, eval.hazard_of(k), eval.shift);
}

double IntensityEngine::gamma_G(const PortfolioState& state, int j) const {
  return gamma_from(evaluate(state, SetKind::G), j);
}

double IntensityEngine::gamma_F_bar(const PortfolioState& state, int j) const {
  if (j < 1) throw std::invalid_argument("gamma_F_bar: name must be a reference name");
  return gamma_from(evaluate(state, SetKind::FBar), j);
}

double IntensityEngine::gamma_F_tilde(const PortfolioState& state, int j) const {
  if (j < 1) throw std::invalid_argument("gamma_F_tilde: name must be a reference name");
  return gamma_from(evaluate(state, SetKind::FTilde), j);
}

double IntensityEngine::beta_G(const PortfolioState& state, int k) const {
  return beta_from(state, evaluate(state, SetKind::G), k);
}

double IntensityEngine::beta_F_bar(const PortfolioState& state, int k) const {
  return beta_from(state, evaluate(state, SetKind::FBar), k);
}

double IntensityEngine::beta_F_tilde(const PortfolioState& state, int k) const {
  return beta_from(state, evaluate(state, SetKind::FTilde), k);
}

double IntensityEngine::azema_S(const PortfolioState& state) const {
  const SetEval tilde = evaluate(state, SetKind::FTilde);
  const SetEval bar = evaluate(state, SetKind::FBar);
  return std::min(1.0, std::exp(tilde.log_survival - bar.log_survival));
}

double IntensityEngine::conditional_survival(const PortfolioState& state, int j, double s,
                                             Scope scope) const {
  if (s < state.t) throw std::invalid_argument("conditional_survival: horizon before current time");
  const SetEval den = evaluate(state, scope == Scope::G ? SetKind::G : SetKind::FBar);
  if (!den.is_alive(j)) throw std::invalid_argument("conditional_survival: name " + std::to_string(j) + " is not alive");
  if (s == state.t) return 1.0;
  std::vector<double> z = den.z;
  const auto pos = std::find(den.alive.begin(), den.alive.end(), j) - den.alive.begin();
  z[pos] = (config_.h(j, s) - state.m_of(j)) / den.alpha - den.shift;
  double log_num = 0.0, mean = 0.0;
  std::vector<double> hazard(z.size());
  equicorr_integrate(z, den.spec, quad_, log_num, mean, hazard);
  return std::min(1.0, std::exp(log_num - den.log_survival));
}

std::vector<double> IntensityEngine::nu_weights(const SetEval& tilde, const SetEval& bar) const {
  const int count = config_.name_count();
  std::vector<double> c(count, 0.0);
  for (std::size_t a = 0; a < tilde.alive.size(); ++a) c[name_index(tilde.alive[a])] -= tilde.hazard[a];
  for (std::size_t a = 0; a < bar.alive.size(); ++a) c[name_index(bar.alive[a])] += bar.hazard[a];
  std::vector<double> w(count, 0.0);
  double c_sum = 0.0;
  for (int i = 0; i < count; ++i) {
    w[i] -= c[i];
    c_sum += c[i];
  }
  for (int i : tilde.I) w[name_index(i)] += tilde.coef.lambda_I * c_sum;
  return w;
}

double IntensityEngine::nu_increment(const PortfolioState& state, double dt, std::span<const double> db) const {
  if (!(dt > 0.0)) throw std::invalid_argument("nu_increment: dt must be > 0");
  if (static_cast<int>(db.size()) != config_.name_count()) throw std::invalid_argument("nu_increment: one increment per name");
  const SetEval tilde = evaluate(state, SetKind::FTilde);
  const SetEval bar = evaluate(state, SetKind::FBar);
  const std::vector<double> w = nu_weights(tilde, bar);
  double out = 0.0;
  for (int name = kBank; name <= config_.n; ++name) {
    const double weight = w[name_index(name)];
    if (weight == 0.0) continue;
    out += weight * (db[name_index(name)] - beta_from(state, bar, name) * dt);
  }
  return bar.vol / bar.alpha * out;
}

double IntensityEngine::nu_variance(double t, double dt, std::span<const double> w) const {
  double sum = 0.0, sum_sq = 0.0;
  for (double v : w) {
    sum += v;
    sum_sq += v * v;
  }
  const double r = config_.rho_copula;
  const double scale = config_.vol(t) / config_.alpha(t);
  return scale * scale * dt * (r * sum * sum + (1.0 - r) * sum_sq);
}

double IntensityEngine::nu_covariation_rate(double t, int k, std::span<const double> w) const {
  double sum = 0.0;
  for (double v : w) sum += v;
  const double r = config_.rho_copula;
  return config_.vol(t) / config_.alpha(t) * (r * sum + (1.0 - r) * w[name_index(k)]);
}

IntensityReport IntensityEngine::report(const PortfolioState& state) const {
  const SetEval g = evaluate(state, SetKind::G);
  const SetEval bar = evaluate(state, SetKind::FBar);
  const SetEval tilde = evaluate(state, SetKind::FTilde);
  IntensityReport r;
  r.t = state.t;
  for (int name = kBank; name <= config_.n; ++name) {
    r.names.push_back(name);
    r.gamma_G.push_back(gamma_from(g, name));
    r.gamma_F_bar.push_back(name >= 1 ? gamma_from(bar, name) : 0.0);
    r.gamma_F_tilde.push_back(name >= 1 ? gamma_from(tilde, name) : 0.0);
    r.beta_G.push_back(beta_from(state, g, name));
    r.beta_F_bar.push_back(beta_from(state, bar, name));
    r.beta_F_tilde.push_back(beta_from(state, tilde, name));
  }
  r.azema = std::min(1.0, std::exp(tilde.log_survival - bar.log_survival));
  return r;
}

double IntensityEngine::cds_clean_value(const PortfolioState& state, const CdsContract& contract,
                                        Scope scope) const {
  const int ref = contract.reference;
  const DefaultRecord* d = state.find_default(ref);
  if (d != nullptr && d->tau <= state.t) return 0.0;
  if (state.t >= contract.maturity) return 0.0;

  const SetEval den = evaluate(state, scope == Scope::G ? SetKind::G : SetKind::FBar);
  const auto pos = std::find(den.alive.begin(), den.alive.end(), ref) - den.alive.begin();
  std::vector<double> z = den.z;
  std::vector<double> hazard(z.size());
  const double h_ref_m = state.m_of(ref);

  const int periods = static_cast<int>(std::llround(contract.maturity * contract.payments_per_year));
  const double step = 1.0 / contract.payments_per_year;
  double protection = 0.0, premium = 0.0;
  double prev_time = state.t, prev_survival = 1.0;
  for (int k = 1; k <= periods; ++k) {
    const double pay = std::min(contract.maturity, k * step);
    if (pay <= state.t) continue;
    z[pos] = (config_.h(ref, pay) - h_ref_m) / den.alpha - den.shift;
    double log_num = 0.0, mean = 0.0;
    equicorr_integrate(z, den.spec, quad_, log_num, mean, hazard);
    const double survival = std::min(prev_survival, std::exp(log_num - den.log_survival));
    const double accrual = pay - prev_time;
    const double mid_discount = std::exp(-contract.rate * (0.5 * (prev_time + pay) - state.t));
    const double pay_discount = std::exp(-contract.rate * (pay - state.t));
    const double default_mass = prev_survival - survival;
    protection += (1.0 - contract.recovery) * mid_discount * default_mass;
    premium += contract.spread * (accrual * pay_discount * survival + 0.5 * accrual * mid_discount * default_mass);
    prev_time = pay;
    prev_survival = survival;
  }
  return protection - premium;
}

double IntensityEngine::cds_par_spread(const PortfolioState& state, CdsContract contract,
                                       Scope scope) const {
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    contract.spread = 0.5 * (lo + hi);
    if (cds_clean_value(state, contract, scope) > 0.0) lo = contract.spread; else hi = contract.spread;
  }
  return 0.5 * (lo + hi);
}

}  // namespace dgc
