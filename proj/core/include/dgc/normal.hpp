#pragma once

#include <limits>

namespace dgc {

// Sentinel for h_i(0) and for coordinates that carry no constraint.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double std_normal_density(double x);

// Upper tail Q(X > x) of a standard normal.
double std_normal_survival(double x);

// log of std_normal_survival, accurate in both tails.
double log_std_normal_survival(double x);

// Inverse of the survival function: returns x with std_normal_survival(x) = p.
double std_normal_survival_inverse(double p);

// Same inverse expressed through q = 1 - p, accurate when p is close to 1.
double std_normal_survival_inverse_complement(double q);

// Mills hazard psi(y) = density / survival.
double mills_hazard(double y);

}  // namespace dgc
