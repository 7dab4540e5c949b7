#pragma once

#include "dgc/equicorr.hpp"
#include "dgc/model.hpp"

#include <span>
#include <vector>

namespace dgc {

// G conditions on every default; F conditions on reference-name defaults only.
enum class Scope { G, F };

// Alive set and conditioning set: full information, the reduced information, and the
// reduced information with bank and counterparty treated as alive.
enum class SetKind { G, FBar, FTilde };

// One factor-integral pass over an alive set J given a defaulted set I.
struct SetEval {
  double t = 0.0;
  double alpha = 1.0;
  double vol = 0.0;
  std::vector<int> alive;
  std::vector<int> I;
  CoefSet coef;
  EquicorrSpec spec;
  double shift = 0.0;  // lambda^I * sum_{i in I} residual_i / alpha
  std::vector<double> z;
  double log_survival = 0.0;
  double factor_mean = 0.0;
  std::vector<double> hazard;  // psi^j per alive name

  bool is_alive(int name) const;
  // psi^j for an alive name, 0 otherwise.
  double hazard_of(int name) const;
};

struct CdsContract {
  int reference = 1;
  double spread = 0.006;
  double recovery = 0.4;
  double maturity = 10.0;
  double rate = 0.02;
  int payments_per_year = 4;
};

struct IntensityReport {
  double t = 0.0;
  std::vector<int> names;
  std::vector<double> gamma_G;        // per name, 0 if defaulted
  std::vector<double> gamma_F_bar;    // per name, reference names only (0 for -1, 0)
  std::vector<double> gamma_F_tilde;  // per name, reference names only (0 for -1, 0)
  std::vector<double> beta_G;
  std::vector<double> beta_F_bar;
  std::vector<double> beta_F_tilde;
  double azema = 1.0;
};

// Pure evaluator of every closed-form quantity of the model at a given state.
class IntensityEngine {
 public:
  explicit IntensityEngine(ModelConfig config, QuadratureConfig quad = {});

  const ModelConfig& config() const { return config_; }
  const QuadratureConfig& quad() const { return quad_; }

  // Alive and conditioning names for a set kind; only defaults with tau <= t count.
  void sets(const PortfolioState& state, SetKind kind, std::vector<int>& alive,
            std::vector<int>& I) const;

  SetEval evaluate(const PortfolioState& state, std::span<const int> alive,
                   std::span<const int> I) const;
  SetEval evaluate(const PortfolioState& state, SetKind kind) const;

  // Intensity of an alive name from a pass that contains it.
  double gamma_from(const SetEval& eval, int j) const;
  // Brownian drift of name k from a pass, using the defaulted branch for k in I.
  double beta_from(const PortfolioState& state, const SetEval& eval, int k) const;

  double gamma_G(const PortfolioState& state, int j) const;
  double gamma_F_bar(const PortfolioState& state, int j) const;
  double gamma_F_tilde(const PortfolioState& state, int j) const;
  double beta_G(const PortfolioState& state, int k) const;
  double beta_F_bar(const PortfolioState& state, int k) const;
  double beta_F_tilde(const PortfolioState& state, int k) const;
  double azema_S(const PortfolioState& state) const;
  double conditional_survival(const PortfolioState& state, int j, double s, Scope scope) const;

  // Weights w_i with dnu = (vol / alpha) sum_i w_i (dB^i - beta_bar^i dt), from the passes
  // over J* u {-1,0} (tilde) and J* (bar) sharing the conditioning set I*.
  std::vector<double> nu_weights(const SetEval& tilde, const SetEval& bar) const;
  // Continuous increment of nu over [t, t + dt] from increments of B per name, with weights
  // and drifts frozen at t.
  double nu_increment(const PortfolioState& state, double dt, std::span<const double> db) const;
  // Variance of the increment over [t, t + dt] given the weights.
  double nu_variance(double t, double dt, std::span<const double> weights) const;
  // d<B^k, nu>/dt given the weights.
  double nu_covariation_rate(double t, int k, std::span<const double> weights) const;

  IntensityReport report(const PortfolioState& state) const;

  // Value to the protection buyer per unit notional.
  double cds_clean_value(const PortfolioState& state, const CdsContract& contract, Scope scope) const;
  double cds_par_spread(const PortfolioState& state, CdsContract contract, Scope scope) const;

 private:
  ModelConfig config_;
  QuadratureConfig quad_;
};

}  // namespace dgc
