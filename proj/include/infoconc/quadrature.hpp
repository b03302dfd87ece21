#pragma once

#include <array>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace infoconc {

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  long evals = 0;
};

/// Raised when adaptive refinement exhausts its interval budget before the
/// requested tolerance; carries the estimate that was actually achieved.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved, double requested)
      : std::runtime_error(what + " (achieved abs error " +
                           std::to_string(achieved) + ", requested " +
                           std::to_string(requested) + ")"),
        achieved_error(achieved),
        requested_error(requested) {}
  double achieved_error;
  double requested_error;
};

using Fn1D = std::function<double(double)>;
using Fn2D = std::function<double(double, double)>;

/// Adaptive Gauss-Kronrod (G7/K15) bisection over the segments defined by
/// `breakpoints` (sorted, finite). Stops when the summed error estimate meets
/// max(abs_tol, rel_tol*|value|); throws QuadratureError otherwise.
QuadResult integrate_adaptive(const Fn1D& f, std::span<const double> breakpoints,
                              double rel_tol = 1e-12, double abs_tol = 0.0,
                              int max_intervals = 4000);

/// Convenience overload over a single interval [a, b].
QuadResult integrate_adaptive(const Fn1D& f, double a, double b,
                              double rel_tol = 1e-12, double abs_tol = 0.0,
                              int max_intervals = 4000);

/// Locates the point t >= from where W(t) - w_min first exceeds `threshold`,
/// expanding geometrically then bisecting. W must be nondecreasing on
/// [from, +inf). Returns `hard_limit` when the threshold is never reached
/// before it. Used to truncate sub-exponential tails.
double find_tail_cut(const Fn1D& W, double from, double w_min, double threshold,
                     double hard_limit);

/// Analytic bound on the discarded tail mass of ∫ exp(-(W - w_ref)) beyond
/// `cut`, using convexity of W: W(x) >= W(cut) + s (x - cut) with s the local
/// slope. Returns +inf-safe 0 when the slope is not positive (caller keeps
/// the segment instead of truncating).
double exp_tail_bound(double w_at_cut, double w_ref, double slope);

/// Iterated 2D adaptive integration over a rectangle: outer x, inner y.
/// `inner_breaks(x)` supplies y-breakpoints per column.
QuadResult integrate_2d_iterated(const Fn2D& f, std::span<const double> x_breaks,
                                 const std::function<std::vector<double>(double)>& inner_breaks,
                                 double rel_tol = 1e-9, double abs_tol = 0.0);

/// Adaptive quadrature of f over the triangle (ax,ay)-(bx,by)-(cx,cy) via an
/// 8x8 Duffy-mapped Gauss rule with midpoint-subdivision error control.
QuadResult integrate_triangle(const Fn2D& f, const std::array<double, 6>& tri,
                              double rel_tol = 1e-9, double abs_tol = 1e-18,
                              int max_depth = 10);

}  // namespace infoconc
