#pragma once

#include <optional>

#include "infoconc/density.hpp"
#include "infoconc/extreal.hpp"

namespace infoconc::analytic {

// Closed-form oracles for catalog families. Absence (nullopt) means no
// closed form exists for that model; callers pick the quadrature engine
// explicitly instead of a silent fallback.

std::optional<double> entropy_closed(const DensityModel& model);
std::optional<double> varentropy_closed(const DensityModel& model);

/// Law of Y = φ(X) for a normalized homogeneous model of dimension n:
/// Gamma(n, 1).
struct GammaLaw {
  int n = 1;
  double mean() const { return n; }
  double second_moment() const { return static_cast<double>(n) * (n + 1); }
  double variance() const { return n; }
  double pdf(double t) const;
  double cdf(double t) const;  // closed form for integer shape
};

/// Throws std::invalid_argument when the model is not homogeneous.
GammaLaw homogeneous_info_law(const DensityModel& model);

/// F(alpha) = -n log(alpha) for degree-1 homogeneous normalized potentials.
double F_homogeneous(double alpha, int n);

/// E[exp(beta (h~(X*) - h(X*)))] for the product-exponential extremal law:
/// exp(n r(-beta)) for beta < 1, +inf for beta >= 1.
ExtReal mgf_exponential_star(double beta, int n);

}  // namespace infoconc::analytic
