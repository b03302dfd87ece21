#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "infoconc/density.hpp"
#include "infoconc/extreal.hpp"

namespace infoconc::tilt {

// Computes F(alpha) = log ∫ f^alpha, its derivatives, tilted densities,
// entropy/varentropy quadratures and the curve G(alpha) = alpha^n ∫ f^alpha,
// exploiting the model's structure (per-factor 1D quadrature for products,
// the radial reduction for homogeneous gauges, per-triangle rules in 2D).

double compute_F(const DensityModel& model, double alpha);

/// Exact family-preserving tilt: the law of X_alpha ~ f^alpha / ∫ f^alpha.
DensityModel tilted_density(const DensityModel& model, double alpha);

double entropy_quad(const DensityModel& model);
double varentropy_quad(const DensityModel& model);

/// One derivative computed two ways; `consistent` is false when the finite
/// difference and the tilt identity disagree beyond the stated tolerance.
struct DerivCheck {
  double finite_difference = 0.0;
  double identity = 0.0;
  bool consistent = true;
};
struct FDerivatives {
  DerivCheck first;   // F' vs (F(alpha) - h(X_alpha)) / alpha, 1e-5 relative
  DerivCheck second;  // F'' vs V(X_alpha) / alpha^2, 1e-4 relative
};
FDerivatives F_derivatives(const DensityModel& model, double alpha);

struct TiltCurve {
  std::vector<double> alpha;
  std::vector<double> F;
  std::vector<double> Fp;
  std::vector<double> Fpp;
  std::vector<double> V;      // varentropy of X_alpha (quadrature)
  std::vector<double> logG;   // n log(alpha) + F(alpha)
  double K_hat = 0.0;         // max_grid V(X_alpha)
  bool K_le_n = true;
  bool derivative_checks_ok = true;

  void write_csv(std::ostream& os) const;
  std::string to_json_string(const std::string& model_id) const;
};

std::vector<double> default_alpha_grid();  // 40 log-spaced points on [0.1, 10]

TiltCurve compute_tilt_curve(const DensityModel& model,
                             std::span<const double> alpha_grid);

/// Quadrature value of E[exp(beta (h~(X) - h(X)))] = exp(F(1-beta) - beta h).
/// +inf for beta >= 1 on models with unbounded support.
ExtReal mgf_quadrature(const DensityModel& model, double beta);

// Structural helpers, exposed for cross-checks and tests.
double log_tilt_mass_1d(const Density1D& d, double alpha);  // log ∫ f^alpha
/// ∫ g(t) t^{n-1} e^{-rate t} / (n-1)! dt over (0, ∞).
QuadResult gamma_weighted_integral(int n, double rate, const Fn1D& g,
                                   double rel_tol = 1e-12);
/// log ∫ exp(-alpha φ_norm) via radial quadrature (independent of the
/// -n log alpha closed form used by compute_F).
double homogeneous_radial_log_mass(int n, double alpha);
bool has_compact_support(const DensityModel& model);

}  // namespace infoconc::tilt
