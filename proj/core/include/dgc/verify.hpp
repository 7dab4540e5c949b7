#pragma once

#include "dgc/appendix.hpp"
#include "dgc/intensity.hpp"
#include "dgc/simulator.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dgc {

struct VerifyReport {
  std::string name;
  double estimate = 0.0;
  double standard_error = 0.0;
  double target = 0.0;
  double z = 0.0;
  bool pass = false;              // |z| <= 3 unless the test states another criterion
  bool negative_control = false;  // the test is expected to fail
  double runtime_seconds = 0.0;

  // A negative control is satisfied when it fails.
  bool satisfied() const { return negative_control ? !pass : pass; }
};

inline constexpr double kZThreshold = 3.0;

// Builds a report with z = (estimate - target) / se and verdict |z| <= 3.
VerifyReport z_report(std::string name, double estimate, double se, double target,
                      bool negative_control = false);
// Two estimators of one number from the same paths: z uses the standard error of the
// pathwise difference.
VerifyReport paired_report(std::string name, std::span<const double> estimate_samples,
                           std::span<const double> target_samples, bool negative_control = false);
// Deterministic check: pass iff |estimate - target| <= tolerance; se is reported as 0.
VerifyReport tolerance_report(std::string name, double estimate, double target, double tolerance);

// Shared settings of the Monte Carlo suites.
struct SuiteOptions {
  std::uint64_t paths = 100000;
  std::uint64_t seed = 20240917;
  int parallelism = 1;
  QuadratureConfig quad{32, 8.0, 1e-9};
  bool negative_controls = true;
};

// Compensator identities E[1{tau_j <= t}] = E[int_0^{t ^ tau_j} gamma^j ds] at grid checkpoints.
// Scope G uses gamma^j for every name; scope F uses gamma_bar^j for reference names and adds
// the gamma_tilde negative control, evaluated without reweighting.
std::vector<VerifyReport> compensator_suite(const ModelConfig& config, const GridSpec& grid,
                                            const std::vector<double>& checkpoints,
                                            const std::vector<Scope>& scopes,
                                            const SuiteOptions& options);

// E[1{t < tau} X] = E[S_t X] for X in {1, 1{tau_1 <= t}, max(m^1_t, 0)}.
std::vector<VerifyReport> projection_suite(const ModelConfig& config,
                                           const std::vector<double>& checkpoints,
                                           const SuiteOptions& options);

// Weight mean, reweighted compensators with gamma_tilde (and gamma_bar as negative control),
// reweighted drift of B^k with beta_tilde (and beta_bar as negative control).
std::vector<VerifyReport> measure_change_suite(const ModelConfig& config, const GridSpec& grid,
                                               const std::vector<double>& checkpoints, int drift_name,
                                               const SuiteOptions& options);

// Aggregate of int (beta_tilde^k - beta_bar^k) ds minus the realized covariation of B^k and nu
// over the grid steps that start before tau ^ horizon.
std::vector<VerifyReport> jeulin_yor_suite(const ModelConfig& config, const GridSpec& grid,
                                           const SuiteOptions& options);

struct SpikeSummary {
  double rho = 0.0;
  std::uint64_t events = 0;
  std::vector<double> ratios;
  double median = 1.0;
  double median_se = 0.0;
  double fraction_above_one = 0.0;
  double max_abs_log_ratio = 0.0;
};

// Ratios gamma^j(tau_1+) / gamma^j(tau_1-) of surviving names at the first reference default
// before tau ^ horizon.
SpikeSummary spike_statistics(const ModelConfig& config, double horizon, const SuiteOptions& options);
std::vector<VerifyReport> spike_reports(const std::vector<SpikeSummary>& summaries);

// Density checks: full-space normalization at t = 0, the marginal survival of name 1, and a
// three-name box against Monte Carlo frequencies.
struct BoxSpec {
  std::vector<double> lower;  // per name index
  std::vector<double> upper;  // +infinity allowed
};
// Integral of the joint default-time density at t = 0 over a box by a tensor product rule.
double density_box_probability(const ModelConfig& config, const BoxSpec& box);
std::vector<VerifyReport> density_suite(const ModelConfig& config, const SuiteOptions& options);

// Tail ratio bounds, affine envelope of psi^j, exponential moment of the running maximum.
std::vector<VerifyReport> appendix_suite(const QuadratureConfig& quad, std::uint64_t seed);

// Registered suites with their fixed correlation sweeps, grids and checkpoints:
// compensator, projection, measure_change, jeulin_yor, spike, density, appendix.
// Only n, kappa and the hazards of the base configuration are used.
const std::vector<std::string>& suite_names();
std::vector<VerifyReport> run_named_suite(const std::string& name, const ModelConfig& base,
                                          const SuiteOptions& options);
// True when every test passes and every negative control fails.
bool all_satisfied(const std::vector<VerifyReport>& reports);

// Machine-readable report: header "name,estimate,se,target,z,verdict,negative_control".
void write_reports_csv(std::ostream& out, const std::vector<VerifyReport>& reports);
// Human-readable table including runtimes.
void write_reports_table(std::ostream& out, const std::vector<VerifyReport>& reports);

}  // namespace dgc
