#pragma once

#include <functional>
#include <string>
#include <utility>

#include "infoconc/density.hpp"
#include "infoconc/extreal.hpp"

namespace infoconc::bounds {

/// Rate function r(u) = u - log(1+u) on (-1, ∞); +∞ for u <= -1.
/// Nonnegative, convex, r(0) = 0; self-dual in the sense r*(t) = r(-t).
ExtReal rate_r(double u);

using ExtFn = std::function<ExtReal(double)>;

/// Legendre conjugate sup_x { t x - phi(x) } of a convex phi (caller
/// asserted), by geometric bracket expansion and golden-section search on the
/// concave objective (refined to ~1e-10 in x). Returns +∞ when the objective
/// keeps growing past the probe range.
ExtReal legendre_numeric(const ExtFn& phi, double t);

/// Overload for finite-valued functions.
ExtReal legendre_numeric(const std::function<double(double)>& phi, double t);

/// Bound on E[exp(beta (h~(X)-h(X)))]: exp(K r(-beta)); +∞ for beta >= 1
/// when K > 0; identically 1 when K == 0.
ExtReal mgf_bound(double K, double beta);

/// Upper/lower tail bounds at deviation t > 0: exp(-K r(t/K)) and
/// exp(-K r(-t/K)) (0 when t >= K).
std::pair<double, double> tail_bounds(double K, double t);

/// exp(-(n/2) r(t)) for P{|Z|^2/n - 1 > t}, Z standard normal in R^n.
double gaussian_sqnorm_tail(int n, double t);

/// Comparison curve 2 exp(-t sqrt(n)/16) (weaker bound kept for reports).
double subopt_tail_curve(int n, double t);

struct MaxEntropyReport {
  double h = 0.0;
  double bound = 0.0;  // -log ||f||_inf + n
  double slack = 0.0;  // bound - h
};
MaxEntropyReport max_entropy_check(const DensityModel& model);

struct ModeMeanReport {
  double lhs = 0.0;  // ||f||_inf
  double rhs = 0.0;  // e^n f(E[X])
  bool pass = false;
  std::string note;
};
ModeMeanReport mode_mean_check(const DensityModel& model);

/// Lower bound 1 - (e c log(1/c))^n for P{f(X) >= c^n ||f||_inf};
/// requires 0 < c < 1/e.
double small_ball_bound(int n, double c);

}  // namespace infoconc::bounds
