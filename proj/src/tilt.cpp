#include "infoconc/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "infoconc/parallel.hpp"

namespace infoconc::tilt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// ∫ P(U~(x)) e^{-alpha U~(x)} dx on the truncated support, with the exponent
// shifted to its minimum for conditioning. Returns the integral directly.
double potential_moment_1d(const Density1D& d, double alpha, const Fn1D& P,
                           double rel_tol = 1e-13, double abs_tol = 1e-13) {
  auto bp = d.integration_breakpoints(alpha);
  double shift = alpha * d.potential(d.mode());
  Fn1D f = [&](double x) {
    double u = d.potential(x);
    return P(u) * std::exp(-(alpha * u - shift));
  };
  QuadResult r = integrate_adaptive(f, bp, rel_tol, abs_tol, 6000);
  return r.value * std::exp(-shift);
}

double entropy_quad_1d(const Density1D& d) {
  return potential_moment_1d(d, 1.0, [](double u) { return u; });
}

double varentropy_quad_1d(const Density1D& d) {
  double h = entropy_quad_1d(d);
  double v = potential_moment_1d(
      d, 1.0, [h](double u) { return (u - h) * (u - h); });
  if (v < -1e-10)
    throw std::runtime_error("varentropy quadrature returned " +
                             std::to_string(v) + " < -1e-10");
  return std::max(v, 0.0);
}

// 2D tabulated helpers: per-triangle adaptive quadrature of P(U~) e^{-a U~}.
double potential_moment_2d(const DensityModel& m, double alpha, const Fn1D& P) {
  const auto& p = std::get<Tabulated2DP>(m.params());
  double total = 0.0;
  Fn2D f = [&](double x, double y) {
    double u = m.potential_2d_raw(x, y) + p.log_norm;
    return P(u) * std::exp(-alpha * u);
  };
  for (std::size_t i = 0; i + 1 < p.xs.size(); ++i)
    for (std::size_t j = 0; j + 1 < p.ys.size(); ++j) {
      auto tris = m.cell_triangles(i, j);
      total += integrate_triangle(f, tris[0], 1e-10).value;
      total += integrate_triangle(f, tris[1], 1e-10).value;
    }
  return total;
}

const HomogeneousP& homog(const DensityModel& m) {
  return std::get<HomogeneousP>(m.params());
}

}  // namespace

double log_tilt_mass_1d(const Density1D& d, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("log_tilt_mass_1d: alpha must be > 0");
  auto bp = d.integration_breakpoints(alpha);
  double shift = alpha * d.potential(d.mode());
  Fn1D f = [&](double x) {
    return std::exp(-(alpha * d.potential(x) - shift));
  };
  QuadResult r = integrate_adaptive(f, bp, 1e-13, 1e-280, 6000);
  return std::log(r.value) - shift;
}

QuadResult gamma_weighted_integral(int n, double rate, const Fn1D& g,
                                   double rel_tol) {
  if (n < 1) throw std::invalid_argument("gamma_weighted_integral: n >= 1");
  if (!(rate > 0.0))
    throw std::invalid_argument("gamma_weighted_integral: rate must be > 0");
  double lg = std::lgamma(static_cast<double>(n));
  Fn1D w = [&](double t) {
    if (t <= 0.0) return n == 1 ? lg : kInf;
    return rate * t - (n - 1) * std::log(t) + lg;
  };
  double mode = n == 1 ? 0.0 : (n - 1) / rate;
  double w_min = w(std::max(mode, 1e-300));
  double hi = find_tail_cut(w, std::max(mode, 1.0 / rate), w_min, 745.0, kInf);
  Fn1D f = [&](double t) {
    double e = w(t) - w_min;
    return e >= 745.0 ? 0.0 : g(t) * std::exp(-e);
  };
  std::vector<double> bp = {0.0, mode, std::max(mode, 1.0 / rate), hi};
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  QuadResult r = integrate_adaptive(f, bp, rel_tol, 1e-14, 6000);
  double scale = std::exp(-w_min);
  r.value *= scale;
  r.abs_error *= scale;
  return r;
}

double homogeneous_radial_log_mass(int n, double alpha) {
  QuadResult r =
      gamma_weighted_integral(n, alpha, [](double) { return 1.0; }, 1e-12);
  return std::log(r.value);
}

bool has_compact_support(const DensityModel& model) {
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      for (const auto& f : std::get<ProductP>(model.params()).factors)
        if (!std::isfinite(f.support_lo()) || !std::isfinite(f.support_hi()))
          return false;
      return true;
    }
    case DensityModel::Structure::Tabulated2D:
      return true;
    default:
      return false;
  }
}

double compute_F(const DensityModel& model, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("compute_F: alpha must be > 0");
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      double s = 0.0;
      for (const auto& f : std::get<ProductP>(model.params()).factors)
        s += log_tilt_mass_1d(f, alpha);
      return s;
    }
    case DensityModel::Structure::GaussianIso:
      return model.dim() * log_tilt_mass_1d(Density1D::gaussian(0.0, 1.0), alpha);
    case DensityModel::Structure::Homogeneous:
      // G ≡ 1 for degree-1 homogeneous potentials; the independent radial
      // quadrature route is homogeneous_radial_log_mass.
      return -model.dim() * std::log(alpha);
    case DensityModel::Structure::Tabulated2D: {
      return std::log(
          potential_moment_2d(model, alpha, [](double) { return 1.0; }));
    }
  }
  throw std::logic_error("compute_F: unreachable");
}

DensityModel tilted_density(const DensityModel& model, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("tilted_density: alpha must be > 0");
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      std::vector<Density1D> tilted;
      for (const auto& f : std::get<ProductP>(model.params()).factors)
        tilted.push_back(f.tilted(alpha));
      return DensityModel::product(std::move(tilted), model.id() + "-tilt");
    }
    case DensityModel::Structure::GaussianIso: {
      std::vector<Density1D> tilted(
          model.dim(), Density1D::gaussian(0.0, 1.0 / std::sqrt(alpha)));
      return DensityModel::product(std::move(tilted), model.id() + "-tilt");
    }
    case DensityModel::Structure::Homogeneous:
      // exp(-alpha φ) renormalizes back to the same normalized gauge; the
      // tilt is the identity in law.
      return model;
    case DensityModel::Structure::Tabulated2D: {
      const auto& p = std::get<Tabulated2DP>(model.params());
      std::vector<double> u = p.u;
      for (auto& v : u) v *= alpha;
      return DensityModel::tabulated2d(p.xs, p.ys, std::move(u),
                                       model.id() + "-tilt");
    }
  }
  throw std::logic_error("tilted_density: unreachable");
}

double entropy_quad(const DensityModel& model) {
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      double s = 0.0;
      for (const auto& f : std::get<ProductP>(model.params()).factors)
        s += entropy_quad_1d(f);
      return s;
    }
    case DensityModel::Structure::GaussianIso:
      return model.dim() * entropy_quad_1d(Density1D::gaussian(0.0, 1.0));
    case DensityModel::Structure::Homogeneous:
      // h~ = φ_norm(X); radial law integral.
      return gamma_weighted_integral(model.dim(), 1.0,
                                     [](double t) { return t; })
          .value;
    case DensityModel::Structure::Tabulated2D:
      return potential_moment_2d(model, 1.0, [](double u) { return u; });
  }
  throw std::logic_error("entropy_quad: unreachable");
}

double varentropy_quad(const DensityModel& model) {
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      double s = 0.0;
      for (const auto& f : std::get<ProductP>(model.params()).factors)
        s += varentropy_quad_1d(f);  // independent factors: variances add
      return s;
    }
    case DensityModel::Structure::GaussianIso:
      return model.dim() * varentropy_quad_1d(Density1D::gaussian(0.0, 1.0));
    case DensityModel::Structure::Homogeneous: {
      int n = model.dim();
      double h = gamma_weighted_integral(n, 1.0, [](double t) { return t; })
                     .value;
      double v = gamma_weighted_integral(
                     n, 1.0, [h](double t) { return (t - h) * (t - h); })
                     .value;
      return std::max(v, 0.0);
    }
    case DensityModel::Structure::Tabulated2D: {
      double h = potential_moment_2d(model, 1.0, [](double u) { return u; });
      double v = potential_moment_2d(
          model, 1.0, [h](double u) { return (u - h) * (u - h); });
      if (v < -1e-10)
        throw std::runtime_error("varentropy quadrature negative: " +
                                 std::to_string(v));
      return std::max(v, 0.0);
    }
  }
  throw std::logic_error("varentropy_quad: unreachable");
}

FDerivatives F_derivatives(const DensityModel& model, double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("F_derivatives: alpha must be > 0");
  double h = std::max(1e-5, 1e-4 * alpha);
  double fm2 = compute_F(model, alpha - 2 * h);
  double fm1 = compute_F(model, alpha - h);
  double f0 = compute_F(model, alpha);
  double fp1 = compute_F(model, alpha + h);
  double fp2 = compute_F(model, alpha + 2 * h);

  FDerivatives out;
  out.first.finite_difference = (fp1 - fm1) / (2.0 * h);
  out.second.finite_difference =
      (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);

  DensityModel tilt = tilted_density(model, alpha);
  double h_alpha = entropy_quad(tilt);
  out.first.identity = (f0 - h_alpha) / alpha;
  double v_alpha = varentropy_quad(tilt);
  out.second.identity = v_alpha / (alpha * alpha);

  auto rel_ok = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };
  out.first.consistent =
      rel_ok(out.first.finite_difference, out.first.identity, 1e-5);
  out.second.consistent =
      rel_ok(out.second.finite_difference, out.second.identity, 1e-4);
  return out;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> g(40);
  for (int i = 0; i < 40; ++i)
    g[i] = std::pow(10.0, -1.0 + 2.0 * i / 39.0);
  return g;
}

TiltCurve compute_tilt_curve(const DensityModel& model,
                             std::span<const double> alpha_grid) {
  if (alpha_grid.size() < 5)
    throw std::invalid_argument("compute_tilt_curve: need >= 5 grid points");
  for (std::size_t i = 0; i < alpha_grid.size(); ++i) {
    if (!(alpha_grid[i] > 0.0))
      throw std::invalid_argument("compute_tilt_curve: grid must be > 0");
    if (i > 0 && !(alpha_grid[i] > alpha_grid[i - 1]))
      throw std::invalid_argument("compute_tilt_curve: grid must increase");
  }
  std::size_t m = alpha_grid.size();
  TiltCurve c;
  c.alpha.assign(alpha_grid.begin(), alpha_grid.end());
  c.F.resize(m);
  c.Fp.resize(m);
  c.Fpp.resize(m);
  c.V.resize(m);
  c.logG.resize(m);
  std::vector<char> ok(m, 1);
  int n = model.dim();
  // Grid points are independent; block size 1 keeps the assignment exact for
  // any worker count.
  parallel_for_blocks(
      m,
      [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
          double a = alpha_grid[i];
          c.F[i] = compute_F(model, a);
          FDerivatives d = F_derivatives(model, a);
          c.Fp[i] = d.first.finite_difference;
          c.Fpp[i] = d.second.finite_difference;
          c.V[i] = d.second.identity * a * a;  // V(X_alpha)
          c.logG[i] = n * std::log(a) + c.F[i];
          ok[i] = d.first.consistent && d.second.consistent;
        }
      },
      0, 1);
  c.K_hat = *std::max_element(c.V.begin(), c.V.end());
  c.K_le_n = c.K_hat <= n + 1e-9;
  c.derivative_checks_ok =
      std::all_of(ok.begin(), ok.end(), [](char v) { return v != 0; });
  return c;
}

ExtReal mgf_quadrature(const DensityModel& model, double beta) {
  if (beta == 0.0) return ExtReal(1.0);
  double alpha = 1.0 - beta;
  if (alpha <= 0.0 && !has_compact_support(model)) return ExtReal::infinity();
  double h = entropy_quad(model);
  double F;
  if (alpha > 0.0) {
    F = compute_F(model, alpha);
  } else {
    // Compact support: ∫ f^alpha with alpha <= 0 integrates a bounded weight
    // over the (finite) support; no truncation involved.
    switch (model.structure()) {
      case DensityModel::Structure::Product: {
        double s = 0.0;
        for (const auto& f : std::get<ProductP>(model.params()).factors) {
          std::vector<double> bp = f.integration_breakpoints(1.0);
          bp.front() = f.support_lo();
          bp.back() = f.support_hi();
          Fn1D g = [&](double x) {
            return std::exp(-alpha * f.potential(x));
          };
          s += std::log(integrate_adaptive(g, bp, 1e-12, 1e-280, 6000).value);
        }
        F = s;
        break;
      }
      case DensityModel::Structure::Tabulated2D:
        F = std::log(potential_moment_2d(model, alpha,
                                         [](double) { return 1.0; }));
        break;
      default:
        return ExtReal::infinity();
    }
  }
  return ExtReal(std::exp(F - beta * h));
}

void TiltCurve::write_csv(std::ostream& os) const {
  os << "alpha,F,Fp,Fpp,V,logG\n";
  os.precision(17);
  for (std::size_t i = 0; i < alpha.size(); ++i)
    os << alpha[i] << ',' << F[i] << ',' << Fp[i] << ',' << Fpp[i] << ','
       << V[i] << ',' << logG[i] << '\n';
}

std::string TiltCurve::to_json_string(const std::string& model_id) const {
  nlohmann::json j;
  j["model"] = model_id;
  j["alpha"] = alpha;
  j["F"] = F;
  j["Fp"] = Fp;
  j["Fpp"] = Fpp;
  j["V"] = V;
  j["logG"] = logG;
  j["K_hat"] = K_hat;
  j["K_le_n"] = K_le_n;
  j["derivative_checks_ok"] = derivative_checks_ok;
  return j.dump(2);
}

}  // namespace infoconc::tilt
