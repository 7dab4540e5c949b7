#pragma once

#include <span>
#include <vector>

namespace dgc {

// Centered Gaussian vector with common variance sigma^2 and pairwise correlation rho.
struct EquicorrSpec {
  int size = 1;
  double rho = 0.0;
  double sigma = 1.0;

  void validate() const;
};

// Trapezoid rule on the common factor, centred at the mode of the integrand.
// The node spacing is (2 * domain_halfwidth / node_count) local standard deviations; the
// lattice extends until every integrand is negligible.
struct QuadratureConfig {
  int node_count = 128;
  double domain_halfwidth = 8.0;
  double refinement_tolerance = 1e-9;

  void validate() const;
};

// Everything one pass over the factor integral yields.
struct FactorIntegral {
  double log_survival = 0.0;        // log Q(xi_j > z_j, j in J)
  double factor_mean = 0.0;         // mean of the common factor under the survival-weighted law
  std::vector<double> hazard;       // psi^j per coordinate, 0 for unconstrained coordinates
};

// Single pass computing the orthant survival, every psi^j and the factor mean.
// Coordinates equal to -infinity are unconstrained and dropped.
FactorIntegral equicorr_integrate(std::span<const double> z, const EquicorrSpec& spec,
                                  const QuadratureConfig& quad);

// Allocation-free variant: hazard must have length z.size().
void equicorr_integrate(std::span<const double> z, const EquicorrSpec& spec,
                        const QuadratureConfig& quad, double& log_survival,
                        double& factor_mean, std::span<double> hazard);

double equicorr_survival(std::span<const double> z, const EquicorrSpec& spec,
                         const QuadratureConfig& quad);

// psi^j = -d/dz_j log Phi_J(z); j is zero-based.
double equicorr_hazard_gradient(std::span<const double> z, int j, const EquicorrSpec& spec,
                                const QuadratureConfig& quad);

// E[1{xi_l > z_l for all l} (xi_k + x)]; k is zero-based.
double truncated_first_moment(std::span<const double> z, int k, double x,
                              const EquicorrSpec& spec, const QuadratureConfig& quad);

// Ratio E[xi_k + x | xi_l > z_l for all l] given the moments of one pass.
double truncated_mean_ratio(const EquicorrSpec& spec, double factor_mean, double hazard_k,
                            double x);

}  // namespace dgc
