#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dgc {

// Names run over {-1, 0, 1, ..., n}: -1 is the bank, 0 the counterparty, 1..n the
// reference names. Containers indexed by name use position name + 1.
inline constexpr int kBank = -1;
inline constexpr int kCounterparty = 0;
inline int name_index(int name) { return name + 1; }
inline int index_name(int index) { return index - 1; }

struct ModelConfig {
  int n = 1;
  double rho_copula = 0.0;
  double kappa = 0.25;
  std::vector<double> hazards;  // indexed by name_index, length n + 2

  // n = 1 with unit-percent hazards on every name.
  static ModelConfig defaults();

  int name_count() const { return n + 2; }
  double hazard(int name) const;
  void validate() const;

  // Volatility sigma(s) = sqrt(kappa) exp(-kappa s / 2) and its tail alpha(t).
  double vol(double t) const;
  double alpha(double t) const;
  // Integrals of vol and vol^2 over [t0, t1].
  double vol_integral(double t0, double t1) const;
  double vol_sq_integral(double t0, double t1) const;

  // Marginal calibration: std_normal_survival(h(i, t)) = exp(-lambda_i t).
  double h(int name, double t) const;
  double h_inverse(int name, double x) const;
  double h_dot(int name, double t) const;
};

struct CoefSet {
  double rho_I = 0.0;
  double sigma_I = 1.0;
  double lambda_I = 0.0;
};

CoefSet coefs(int I_size, double rho_copula);

struct DefaultRecord {
  int name = 0;
  double tau = 0.0;
  std::optional<double> residual;  // h_i(tau_i) - m^i_t

  bool operator==(const DefaultRecord&) const = default;
};

struct PortfolioState {
  double t = 0.0;
  std::vector<double> m;               // indexed by name_index
  std::vector<DefaultRecord> defaults;  // at most one record per name

  static PortfolioState initial(const ModelConfig& config);

  bool is_defaulted(int name) const;
  const DefaultRecord* find_default(int name) const;
  double m_of(int name) const { return m.at(name_index(name)); }

  // Adds a default of name at tau with residual h(tau) - m^name_t.
  void add_default(const ModelConfig& config, int name, double tau);
  // Recomputes every residual from tau and the current m.
  void refresh_residuals(const ModelConfig& config);

  void validate(const ModelConfig& config) const;

  bool operator==(const PortfolioState&) const = default;
};

// Z^{j,I}_t(u): conditioned argument of name j at horizon u given the defaulted set I.
double z_argument(const ModelConfig& config, const PortfolioState& state, int j, double u,
                  std::span<const int> I);

}  // namespace dgc
