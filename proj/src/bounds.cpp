#include "infoconc/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "infoconc/tilt.hpp"

namespace infoconc::bounds {

ExtReal rate_r(double u) {
  if (u <= -1.0) return ExtReal::infinity();
  return ExtReal(u - std::log1p(u));
}

namespace {

double objective(const ExtFn& phi, double t, double x) {
  ExtReal p = phi(x);
  if (p.is_infinite()) return -std::numeric_limits<double>::infinity();
  return t * x - p.value();
}

}  // namespace

ExtReal legendre_numeric(const ExtFn& phi, double t) {
  // Initial bracket, expanded geometrically until the objective stops rising
  // at the probed scale (factor-2 spacing keeps the growth test above the
  // cancellation noise of t*x - phi(x) at large |x|).
  double lo = -1.0 + 1e-12;
  double hi = 50.0;
  auto g = [&](double x) { return objective(phi, t, x); };
  const double grow_limit = 1e12;
  for (;;) {
    double next = hi * 2.0;
    if (!(g(next) > g(hi))) {
      hi = next;
      break;
    }
    hi = next;
    if (hi > grow_limit) return ExtReal::infinity();
  }
  for (;;) {
    double next = lo < 0.0 ? lo * 2.0 : -2.0 * (std::abs(lo) + 1.0);
    if (!(g(next) > g(lo))) {
      lo = next;
      break;
    }
    lo = next;
    if (lo < -grow_limit) return ExtReal::infinity();
  }
  // Golden-section on the (quasi-)concave objective.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && (b - a) > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b)); ++it) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
    }
  }
  double x_star = 0.5 * (a + b);
  double best = g(x_star);
  best = std::max(best, std::max(gc, gd));
  if (!std::isfinite(best)) {
    // Whole bracket outside the domain of phi; conjugate value is the
    // supremum over an empty effective set only if phi == +inf everywhere,
    // which convex callers never pass. Treat as unbounded-below objective.
    throw std::invalid_argument("legendre_numeric: objective is -inf on the probed range");
  }
  return ExtReal(best);
}

ExtReal legendre_numeric(const std::function<double(double)>& phi, double t) {
  return legendre_numeric(
      ExtFn([&phi](double x) {
        double v = phi(x);
        if (std::isinf(v) && v > 0) return ExtReal::infinity();
        return ExtReal(v);
      }),
      t);
}

ExtReal mgf_bound(double K, double beta) {
  if (K < 0.0) throw std::invalid_argument("mgf_bound: K must be >= 0");
  if (K == 0.0) return ExtReal(1.0);
  ExtReal r = rate_r(-beta);
  if (r.is_infinite()) return ExtReal::infinity();
  return ExtReal(std::exp(K * r.value()));
}

std::pair<double, double> tail_bounds(double K, double t) {
  if (!(K > 0.0)) throw std::invalid_argument("tail_bounds: K must be > 0");
  if (!(t > 0.0)) throw std::invalid_argument("tail_bounds: t must be > 0");
  double upper = std::exp(-K * rate_r(t / K).value());
  ExtReal rl = rate_r(-t / K);
  double lower = rl.is_infinite() ? 0.0 : std::exp(-K * rl.value());
  return {upper, lower};
}

double gaussian_sqnorm_tail(int n, double t) {
  if (n < 1) throw std::invalid_argument("gaussian_sqnorm_tail: n >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("gaussian_sqnorm_tail: t > 0");
  return std::exp(-0.5 * n * rate_r(t).value());
}

double subopt_tail_curve(int n, double t) {
  return 2.0 * std::exp(-t * std::sqrt(static_cast<double>(n)) / 16.0);
}

MaxEntropyReport max_entropy_check(const DensityModel& model) {
  MaxEntropyReport rep;
  rep.h = tilt::entropy_quad(model);
  rep.bound = -model.log_sup_density() + model.dim();
  rep.slack = rep.bound - rep.h;
  return rep;
}

ModeMeanReport mode_mean_check(const DensityModel& model) {
  ModeMeanReport rep;
  rep.lhs = std::exp(model.log_sup_density());
  std::vector<double> mu = model.mean();
  double fmu = std::exp(model.log_density(mu));
  if (!(fmu > 0.0)) {
    rep.rhs = 0.0;
    rep.pass = false;
    rep.note = "density vanishes at the mean; log-concave models cannot do "
               "this - model bug";
    return rep;
  }
  rep.rhs = std::exp(static_cast<double>(model.dim())) * fmu;
  rep.pass = rep.lhs <= rep.rhs * (1.0 + 1e-9);
  return rep;
}

double small_ball_bound(int n, double c) {
  if (!(c > 0.0) || !(c < 1.0 / std::numbers::e))
    throw std::domain_error("small_ball_bound: c must lie in (0, 1/e)");
  double base = std::numbers::e * c * std::log(1.0 / c);
  return 1.0 - std::pow(base, n);
}

}  // namespace infoconc::bounds
