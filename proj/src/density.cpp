#include "infoconc/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "infoconc/rng.hpp"

namespace infoconc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Exact mass of exp(-u_pl) on one linear segment, anchored at the lower
// potential end for stability.
double segment_mass(double u0, double u1, double len) {
  if (len <= 0.0) return 0.0;
  double s = (u1 - u0) / len;
  if (s == 0.0) return std::exp(-u0) * len;
  if (s > 0.0) return std::exp(-u0) * (-std::expm1(-s * len)) / s;
  return std::exp(-u1) * (-std::expm1(s * len)) / (-s);
}

double interp_pl(const std::vector<double>& xs, const std::vector<double>& us,
                 double x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  if (hi == 0) return us.front();
  if (hi == xs.size()) return us.back();
  std::size_t lo = hi - 1;
  double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return us[lo] + t * (us[hi] - us[lo]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Density1D

Density1D Density1D::gaussian(double mu, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian: sigma must be > 0");
  return Density1D(Kind::Gaussian, GaussianP{mu, sigma});
}

Density1D Density1D::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
  return Density1D(Kind::Exponential, ExponentialP{rate, 0.0});
}

Density1D Density1D::gamma(double shape) {
  if (!(shape >= 1.0))
    throw std::invalid_argument(
        "gamma: shape must be >= 1 (shape < 1 is not log-concave)");
  return Density1D(Kind::Gamma, GammaP{shape, 1.0, 0.0});
}

Density1D Density1D::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform: need a < b");
  return Density1D(Kind::Uniform, UniformP{a, b});
}

Density1D Density1D::tabulated(std::vector<double> x, std::vector<double> u) {
  if (x.size() != u.size() || x.size() < 2)
    throw std::invalid_argument("tabulated: need >= 2 matching (x, U) pairs");
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("tabulated: x grid must be strictly increasing");
  // Node-chord convexity: each interior value may not exceed the chord of its
  // neighbours by more than 1e-12 (scaled). Equivalent to midpoint convexity
  // for a piecewise-linear potential.
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    double t = (x[i] - x[i - 1]) / (x[i + 1] - x[i - 1]);
    double chord = u[i - 1] + t * (u[i + 1] - u[i - 1]);
    double tol = 1e-12 * std::max(1.0, std::abs(u[i]));
    if (u[i] > chord + tol) {
      std::ostringstream os;
      os << "tabulated: potential is not convex at node " << i
         << " (residual " << (chord - u[i]) << ")";
      throw std::invalid_argument(os.str());
    }
  }
  TabulatedP p;
  p.x = std::move(x);
  p.u = std::move(u);
  p.seg_mass.resize(p.x.size() - 1);
  double z = 0.0;
  for (std::size_t i = 0; i + 1 < p.x.size(); ++i) {
    p.seg_mass[i] = segment_mass(p.u[i], p.u[i + 1], p.x[i + 1] - p.x[i]);
    z += p.seg_mass[i];
  }
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::invalid_argument("tabulated: potential is not integrable");
  p.log_norm = std::log(z);
  return Density1D(Kind::Tabulated, std::move(p));
}

std::string Density1D::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Gaussian: {
      auto& p = std::get<GaussianP>(params_);
      os << "gaussian(mu=" << p.mu << ",sigma=" << p.sigma << ")";
      break;
    }
    case Kind::Exponential: {
      auto& p = std::get<ExponentialP>(params_);
      os << "exponential(rate=" << p.rate;
      if (p.loc != 0.0) os << ",loc=" << p.loc;
      os << ")";
      break;
    }
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      os << "gamma(shape=" << p.shape << ",rate=" << p.rate;
      if (p.loc != 0.0) os << ",loc=" << p.loc;
      os << ")";
      break;
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      os << "uniform(" << p.a << "," << p.b << ")";
      break;
    }
    case Kind::Tabulated: {
      auto& p = std::get<TabulatedP>(params_);
      os << "tabulated[" << p.x.size() << " nodes on (" << p.x.front() << ","
         << p.x.back() << ")]";
      break;
    }
  }
  return os.str();
}

bool Density1D::in_support(double x) const {
  switch (kind_) {
    case Kind::Gaussian:
      return true;
    case Kind::Exponential:
      return x >= std::get<ExponentialP>(params_).loc;
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      return p.shape == 1.0 ? x >= p.loc : x > p.loc;
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      return x >= p.a && x <= p.b;
    }
    case Kind::Tabulated: {
      auto& p = std::get<TabulatedP>(params_);
      return x >= p.x.front() && x <= p.x.back();
    }
  }
  return false;
}

double Density1D::support_lo() const {
  switch (kind_) {
    case Kind::Gaussian:
      return -kInf;
    case Kind::Exponential:
      return std::get<ExponentialP>(params_).loc;
    case Kind::Gamma:
      return std::get<GammaP>(params_).loc;
    case Kind::Uniform:
      return std::get<UniformP>(params_).a;
    case Kind::Tabulated:
      return std::get<TabulatedP>(params_).x.front();
  }
  return -kInf;
}

double Density1D::support_hi() const {
  switch (kind_) {
    case Kind::Gaussian:
    case Kind::Exponential:
    case Kind::Gamma:
      return kInf;
    case Kind::Uniform:
      return std::get<UniformP>(params_).b;
    case Kind::Tabulated:
      return std::get<TabulatedP>(params_).x.back();
  }
  return kInf;
}

double Density1D::potential(double x) const {
  if (!in_support(x)) return kInf;
  switch (kind_) {
    case Kind::Gaussian: {
      auto& p = std::get<GaussianP>(params_);
      double z = (x - p.mu) / p.sigma;
      return std::log(p.sigma) + kLogSqrt2Pi + 0.5 * z * z;
    }
    case Kind::Exponential: {
      auto& p = std::get<ExponentialP>(params_);
      return -std::log(p.rate) + p.rate * (x - p.loc);
    }
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      double y = x - p.loc;
      if (y == 0.0) return p.shape == 1.0 ? -std::log(p.rate) : kInf;
      return std::lgamma(p.shape) - p.shape * std::log(p.rate) -
             (p.shape - 1.0) * std::log(y) + p.rate * y;
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      return std::log(p.b - p.a);
    }
    case Kind::Tabulated: {
      auto& p = std::get<TabulatedP>(params_);
      return interp_pl(p.x, p.u, x) + p.log_norm;
    }
  }
  return kInf;
}

double Density1D::log_density(double x) const {
  double u = potential(x);
  return u == kInf ? -kInf : -u;
}

double Density1D::mode() const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::get<GaussianP>(params_).mu;
    case Kind::Exponential:
      return std::get<ExponentialP>(params_).loc;
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      return p.loc + (p.shape - 1.0) / p.rate;
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      return 0.5 * (p.a + p.b);
    }
    case Kind::Tabulated: {
      // A piecewise-linear convex potential attains its minimum at a node.
      auto& p = std::get<TabulatedP>(params_);
      std::size_t best =
          std::min_element(p.u.begin(), p.u.end()) - p.u.begin();
      return p.x[best];
    }
  }
  return 0.0;
}

double Density1D::mean() const {
  switch (kind_) {
    case Kind::Gaussian:
      return std::get<GaussianP>(params_).mu;
    case Kind::Exponential: {
      auto& p = std::get<ExponentialP>(params_);
      return p.loc + 1.0 / p.rate;
    }
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      return p.loc + p.shape / p.rate;
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      return 0.5 * (p.a + p.b);
    }
    case Kind::Tabulated: {
      auto& p = std::get<TabulatedP>(params_);
      Fn1D f = [&](double x) { return x * std::exp(-potential(x)); };
      return integrate_adaptive(f, integration_breakpoints(), 1e-11, 1e-13).value;
    }
  }
  return 0.0;
}

double Density1D::log_sup_density() const { return -potential(mode()); }

Density1D Density1D::tilted(double alpha) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("tilted: alpha must be > 0");
  switch (kind_) {
    case Kind::Gaussian: {
      auto& p = std::get<GaussianP>(params_);
      return gaussian(p.mu, p.sigma / std::sqrt(alpha));
    }
    case Kind::Exponential: {
      auto& p = std::get<ExponentialP>(params_);
      return Density1D(Kind::Exponential, ExponentialP{p.rate * alpha, p.loc});
    }
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      return Density1D(
          Kind::Gamma,
          GammaP{alpha * (p.shape - 1.0) + 1.0, alpha * p.rate, p.loc});
    }
    case Kind::Uniform:
      return *this;
    case Kind::Tabulated: {
      auto& p = std::get<TabulatedP>(params_);
      std::vector<double> u = p.u;
      for (auto& v : u) v *= alpha;
      return tabulated(p.x, std::move(u));
    }
  }
  throw std::logic_error("tilted: unreachable");
}

Density1D Density1D::affine_image(double scale, double shift) const {
  if (scale == 0.0) throw std::invalid_argument("affine_image: scale must be nonzero");
  switch (kind_) {
    case Kind::Gaussian: {
      auto& p = std::get<GaussianP>(params_);
      return gaussian(scale * p.mu + shift, std::abs(scale) * p.sigma);
    }
    case Kind::Exponential: {
      if (scale < 0.0)
        throw std::invalid_argument("affine_image: exponential needs scale > 0");
      auto& p = std::get<ExponentialP>(params_);
      return Density1D(Kind::Exponential,
                       ExponentialP{p.rate / scale, scale * p.loc + shift});
    }
    case Kind::Gamma: {
      if (scale < 0.0)
        throw std::invalid_argument("affine_image: gamma needs scale > 0");
      auto& p = std::get<GammaP>(params_);
      return Density1D(Kind::Gamma,
                       GammaP{p.shape, p.rate / scale, scale * p.loc + shift});
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      double a = scale * p.a + shift, b = scale * p.b + shift;
      return uniform(std::min(a, b), std::max(a, b));
    }
    case Kind::Tabulated: {
      auto& p = std::get<TabulatedP>(params_);
      std::vector<double> x(p.x.size()), u(p.u.size());
      double lj = std::log(std::abs(scale));
      for (std::size_t i = 0; i < p.x.size(); ++i) {
        std::size_t j = scale > 0 ? i : p.x.size() - 1 - i;
        x[i] = scale * p.x[j] + shift;
        u[i] = p.u[j] + lj;
      }
      return tabulated(std::move(x), std::move(u));
    }
  }
  throw std::logic_error("affine_image: unreachable");
}

std::optional<double> Density1D::entropy_closed() const {
  switch (kind_) {
    case Kind::Gaussian: {
      auto& p = std::get<GaussianP>(params_);
      return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e) +
             std::log(p.sigma);
    }
    case Kind::Exponential:
      return 1.0 - std::log(std::get<ExponentialP>(params_).rate);
    case Kind::Gamma: {
      auto& p = std::get<GammaP>(params_);
      return p.shape - std::log(p.rate) + std::lgamma(p.shape) +
             (1.0 - p.shape) * boost::math::digamma(p.shape);
    }
    case Kind::Uniform: {
      auto& p = std::get<UniformP>(params_);
      return std::log(p.b - p.a);
    }
    case Kind::Tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> Density1D::varentropy_closed() const {
  switch (kind_) {
    case Kind::Gaussian:
      return 0.5;
    case Kind::Exponential:
      return 1.0;
    case Kind::Gamma: {
      double k = std::get<GammaP>(params_).shape;
      return (k - 1.0) * (k - 1.0) * boost::math::trigamma(k) + 2.0 - k;
    }
    case Kind::Uniform:
      return 0.0;
    case Kind::Tabulated:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> Density1D::integration_breakpoints(double alpha,
                                                       double threshold) const {
  if (!(alpha > 0.0))
    throw std::invalid_argument("integration_breakpoints: alpha must be > 0");
  double m = mode();
  double w_min = alpha * potential(m);
  Fn1D w_right = [&](double x) { return alpha * potential(x); };
  Fn1D w_left = [&](double t) { return alpha * potential(m - (t - m)); };
  double hi = find_tail_cut(w_right, m, w_min, threshold, support_hi());
  double lo_reflected = find_tail_cut(w_left, m, w_min, threshold,
                                      m + (m - support_lo()));
  double lo = m - (lo_reflected - m);
  std::vector<double> bp;
  bp.push_back(lo);
  if (kind_ == Kind::Tabulated) {
    auto& p = std::get<TabulatedP>(params_);
    for (double xk : p.x)
      if (xk > lo && xk < hi) bp.push_back(xk);
  }
  if (m > lo && m < hi) bp.push_back(m);
  bp.push_back(hi);
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

double Density1D::truncation_error_bound(double alpha, double threshold) const {
  auto bp = integration_breakpoints(alpha, threshold);
  double bound = 0.0;
  double lo = bp.front(), hi = bp.back();
  double delta = std::max(1e-6, 1e-9 * (hi - lo));
  if (hi < support_hi()) {
    double w = alpha * potential(hi);
    double slope = (w - alpha * potential(hi - delta)) / delta;
    bound += exp_tail_bound(w, 0.0, slope);
  }
  if (lo > support_lo()) {
    double w = alpha * potential(lo);
    double slope = (w - alpha * potential(lo + delta)) / delta;
    bound += exp_tail_bound(w, 0.0, slope);
  }
  return bound;
}

// ---------------------------------------------------------------------------
// GaugeSpec

GaugeSpec GaugeSpec::make(GaugeKind kind, int n, std::vector<double> weights) {
  if (n < 1) throw std::invalid_argument("gauge: dimension must be >= 1");
  GaugeSpec g;
  g.kind = kind;
  g.n = n;
  if (kind == GaugeKind::WeightedL1) {
    if (static_cast<int>(weights.size()) != n)
      throw std::invalid_argument("gauge: need n weights");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("gauge: weights must be > 0");
    g.weights = std::move(weights);
  } else if (!weights.empty()) {
    throw std::invalid_argument("gauge: weights only apply to weighted-l1");
  }
  return g;
}

double GaugeSpec::value(std::span<const double> x) const {
  switch (kind) {
    case GaugeKind::L1: {
      double s = 0.0;
      for (double v : x) s += v;
      return s;
    }
    case GaugeKind::L1Sym: {
      double s = 0.0;
      for (double v : x) s += std::abs(v);
      return s;
    }
    case GaugeKind::L2: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return std::sqrt(s);
    }
    case GaugeKind::Linf: {
      double s = 0.0;
      for (double v : x) s = std::max(s, std::abs(v));
      return s;
    }
    case GaugeKind::WeightedL1: {
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += weights[i] * x[i];
      return s;
    }
  }
  return 0.0;
}

bool GaugeSpec::in_support(std::span<const double> x) const {
  if (kind == GaugeKind::L1 || kind == GaugeKind::WeightedL1) {
    for (double v : x)
      if (v < 0.0) return false;
  }
  return true;
}

double GaugeSpec::unit_ball_volume() const {
  switch (kind) {
    case GaugeKind::L1:
      return std::exp(-std::lgamma(n + 1.0));
    case GaugeKind::L1Sym:
      return std::exp(n * std::log(2.0) - std::lgamma(n + 1.0));
    case GaugeKind::L2:
      return std::exp(0.5 * n * std::log(std::numbers::pi) -
                      std::lgamma(0.5 * n + 1.0));
    case GaugeKind::Linf:
      return std::exp(n * std::log(2.0));
    case GaugeKind::WeightedL1: {
      double lw = 0.0;
      for (double w : weights) lw += std::log(w);
      return std::exp(-std::lgamma(n + 1.0) - lw);
    }
  }
  return 0.0;
}

std::string GaugeSpec::name() const {
  switch (kind) {
    case GaugeKind::L1:
      return "l1";
    case GaugeKind::L1Sym:
      return "l1sym";
    case GaugeKind::L2:
      return "l2";
    case GaugeKind::Linf:
      return "linf";
    case GaugeKind::WeightedL1:
      return "wl1";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// DensityModel

DensityModel DensityModel::product(std::vector<Density1D> factors,
                                   std::string id) {
  if (factors.empty())
    throw std::invalid_argument("product: need at least one factor");
  int n = static_cast<int>(factors.size());
  if (id.empty()) {
    std::ostringstream os;
    os << "product-n" << n;
    id = os.str();
  }
  return DensityModel(Structure::Product, ProductP{std::move(factors)}, n,
                      std::move(id));
}

DensityModel DensityModel::homogeneous(GaugeSpec gauge, std::string id) {
  // scale = (n! Vol{φ<=1})^(1/n) makes ∫ exp(-scale φ) = 1 while keeping
  // degree-1 homogeneity.
  double c = std::exp((std::lgamma(gauge.n + 1.0) +
                       std::log(gauge.unit_ball_volume())) /
                      gauge.n);
  int n = gauge.n;
  if (id.empty()) id = "homog-" + gauge.name() + "-n" + std::to_string(n);
  return DensityModel(Structure::Homogeneous,
                      HomogeneousP{std::move(gauge), c}, n, std::move(id));
}

DensityModel DensityModel::gaussian_iso(int n) {
  if (n < 1) throw std::invalid_argument("gaussian_iso: n must be >= 1");
  return DensityModel(Structure::GaussianIso, GaussianIsoP{n}, n,
                      "gaussian-iso-n" + std::to_string(n));
}

DensityModel DensityModel::tabulated2d(std::vector<double> xs,
                                       std::vector<double> ys,
                                       std::vector<double> u, std::string id) {
  if (xs.size() < 2 || ys.size() < 2 || u.size() != xs.size() * ys.size())
    throw std::invalid_argument("tabulated2d: grid/value size mismatch");
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    if (!(xs[i] < xs[i + 1]))
      throw std::invalid_argument("tabulated2d: x grid must increase");
  for (std::size_t j = 0; j + 1 < ys.size(); ++j)
    if (!(ys[j] < ys[j + 1]))
      throw std::invalid_argument("tabulated2d: y grid must increase");
  std::size_t ny = ys.size();
  // Necessary convexity condition along grid lines (full check is the
  // randomized segment test).
  auto val = [&](std::size_t i, std::size_t j) { return u[i * ny + j]; };
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
      double t = (xs[i] - xs[i - 1]) / (xs[i + 1] - xs[i - 1]);
      double chord = val(i - 1, j) + t * (val(i + 1, j) - val(i - 1, j));
      if (val(i, j) > chord + 1e-12 * std::max(1.0, std::abs(val(i, j))))
        throw std::invalid_argument("tabulated2d: potential not convex along x");
    }
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 1; j + 1 < ny; ++j) {
      double t = (ys[j] - ys[j - 1]) / (ys[j + 1] - ys[j - 1]);
      double chord = val(i, j - 1) + t * (val(i, j + 1) - val(i, j - 1));
      if (val(i, j) > chord + 1e-12 * std::max(1.0, std::abs(val(i, j))))
        throw std::invalid_argument("tabulated2d: potential not convex along y");
    }
  Tabulated2DP p;
  p.xs = std::move(xs);
  p.ys = std::move(ys);
  p.u = std::move(u);
  p.log_norm = 0.0;
  int n = 2;
  if (id.empty()) id = "tabulated2d";
  DensityModel m(Structure::Tabulated2D, std::move(p), n, std::move(id));
  // Normalize: Z by per-triangle quadrature of exp(-U_pl).
  auto& pp = std::get<Tabulated2DP>(m.params_);
  double z = 0.0;
  const auto& X = pp.xs;
  const auto& Y = pp.ys;
  Fn2D f = [&](double a, double b) { return std::exp(-m.potential_2d_raw(a, b)); };
  for (std::size_t i = 0; i + 1 < X.size(); ++i)
    for (std::size_t j = 0; j + 1 < Y.size(); ++j) {
      auto tris = m.cell_triangles(i, j);
      z += integrate_triangle(f, tris[0], 1e-10).value;
      z += integrate_triangle(f, tris[1], 1e-10).value;
    }
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::invalid_argument("tabulated2d: potential is not integrable");
  pp.log_norm = std::log(z);
  return m;
}

double DensityModel::potential(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) {
    std::ostringstream os;
    os << "model '" << id_ << "': point has dimension " << x.size()
       << ", expected " << dim_;
    throw std::invalid_argument(os.str());
  }
  switch (structure_) {
    case Structure::Product: {
      auto& p = std::get<ProductP>(params_);
      double s = 0.0;
      for (std::size_t i = 0; i < p.factors.size(); ++i) {
        double u = p.factors[i].potential(x[i]);
        if (u == kInf) return kInf;
        s += u;
      }
      return s;
    }
    case Structure::Homogeneous: {
      auto& p = std::get<HomogeneousP>(params_);
      if (!p.gauge.in_support(x)) return kInf;
      return p.scale * p.gauge.value(x);
    }
    case Structure::GaussianIso: {
      double s = 0.0;
      for (double v : x) s += v * v;
      return dim_ * kLogSqrt2Pi + 0.5 * s;
    }
    case Structure::Tabulated2D: {
      auto& p = std::get<Tabulated2DP>(params_);
      if (x[0] < p.xs.front() || x[0] > p.xs.back() || x[1] < p.ys.front() ||
          x[1] > p.ys.back())
        return kInf;
      return potential_2d_raw(x[0], x[1]) + p.log_norm;
    }
  }
  return kInf;
}

double DensityModel::log_density(std::span<const double> x) const {
  double u = potential(x);
  return u == kInf ? -kInf : -u;
}

bool DensityModel::in_support(std::span<const double> x) const {
  return potential(x) != kInf;
}

std::vector<double> DensityModel::mode() const {
  switch (structure_) {
    case Structure::Product: {
      auto& p = std::get<ProductP>(params_);
      std::vector<double> m;
      m.reserve(p.factors.size());
      for (const auto& f : p.factors) m.push_back(f.mode());
      return m;
    }
    case Structure::Homogeneous:
    case Structure::GaussianIso:
      return std::vector<double>(dim_, 0.0);
    case Structure::Tabulated2D: {
      auto& p = std::get<Tabulated2DP>(params_);
      std::size_t ny = p.ys.size();
      std::size_t best = std::min_element(p.u.begin(), p.u.end()) - p.u.begin();
      return {p.xs[best / ny], p.ys[best % ny]};
    }
  }
  return {};
}

std::vector<double> DensityModel::mean() const {
  switch (structure_) {
    case Structure::Product: {
      auto& p = std::get<ProductP>(params_);
      std::vector<double> m;
      m.reserve(p.factors.size());
      for (const auto& f : p.factors) m.push_back(f.mean());
      return m;
    }
    case Structure::GaussianIso:
      return std::vector<double>(dim_, 0.0);
    case Structure::Homogeneous: {
      auto& p = std::get<HomogeneousP>(params_);
      switch (p.gauge.kind) {
        case GaugeKind::L1:
          return std::vector<double>(dim_, 1.0 / p.scale);
        case GaugeKind::WeightedL1: {
          std::vector<double> m(dim_);
          for (int i = 0; i < dim_; ++i)
            m[i] = 1.0 / (p.scale * p.gauge.weights[i]);
          return m;
        }
        case GaugeKind::L1Sym:
        case GaugeKind::L2:
        case GaugeKind::Linf:
          return std::vector<double>(dim_, 0.0);  // symmetric
      }
      return std::vector<double>(dim_, 0.0);
    }
    case Structure::Tabulated2D: {
      auto& p = std::get<Tabulated2DP>(params_);
      double mx = 0.0, my = 0.0;
      for (std::size_t i = 0; i + 1 < p.xs.size(); ++i)
        for (std::size_t j = 0; j + 1 < p.ys.size(); ++j) {
          auto tris = cell_triangles(i, j);
          for (const auto& t : tris) {
            Fn2D fx = [&](double a, double b) {
              double pt[2] = {a, b};
              return a * std::exp(log_density(pt));
            };
            Fn2D fy = [&](double a, double b) {
              double pt[2] = {a, b};
              return b * std::exp(log_density(pt));
            };
            mx += integrate_triangle(fx, t, 1e-9, 1e-14).value;
            my += integrate_triangle(fy, t, 1e-9, 1e-14).value;
          }
        }
      return {mx, my};
    }
  }
  return {};
}

double DensityModel::log_sup_density() const {
  std::vector<double> m = mode();
  return log_density(m);
}

std::vector<std::pair<double, double>> DensityModel::probe_box() const {
  std::vector<std::pair<double, double>> box(dim_);
  switch (structure_) {
    case Structure::Product: {
      auto& p = std::get<ProductP>(params_);
      for (int i = 0; i < dim_; ++i) {
        auto bp = p.factors[i].integration_breakpoints(1.0, 60.0);
        box[i] = {bp.front(), bp.back()};
      }
      break;
    }
    case Structure::Homogeneous: {
      auto& p = std::get<HomogeneousP>(params_);
      // φ(T e_i) = 60 along each axis bounds the useful range.
      for (int i = 0; i < dim_; ++i) {
        std::vector<double> e(dim_, 0.0);
        e[i] = 1.0;
        double v = p.gauge.in_support(e) ? p.gauge.value(e) : 0.0;
        if (v <= 0.0) {
          std::vector<double> ones(dim_, 1.0);
          v = p.gauge.value(ones);
        }
        double t = 60.0 / (p.scale * v);
        bool quadrant = (p.gauge.kind == GaugeKind::L1 ||
                         p.gauge.kind == GaugeKind::WeightedL1);
        box[i] = {quadrant ? 0.0 : -t, t};
      }
      break;
    }
    case Structure::GaussianIso:
      for (int i = 0; i < dim_; ++i) box[i] = {-11.0, 11.0};
      break;
    case Structure::Tabulated2D: {
      auto& p = std::get<Tabulated2DP>(params_);
      box[0] = {p.xs.front(), p.xs.back()};
      box[1] = {p.ys.front(), p.ys.back()};
      break;
    }
  }
  return box;
}

double DensityModel::potential_2d_raw(double x, double y) const {
  auto& p = std::get<Tabulated2DP>(params_);
  const auto& X = p.xs;
  const auto& Y = p.ys;
  std::size_t ny = Y.size();
  auto cell_of = [](const std::vector<double>& g, double v) {
    auto it = std::upper_bound(g.begin(), g.end(), v);
    std::size_t hi = static_cast<std::size_t>(it - g.begin());
    if (hi == 0) return std::size_t{0};
    if (hi >= g.size()) return g.size() - 2;
    return hi - 1;
  };
  std::size_t i = cell_of(X, x), j = cell_of(Y, y);
  double tx = (x - X[i]) / (X[i + 1] - X[i]);
  double ty = (y - Y[j]) / (Y[j + 1] - Y[j]);
  double u00 = p.u[i * ny + j], u10 = p.u[(i + 1) * ny + j];
  double u01 = p.u[i * ny + j + 1], u11 = p.u[(i + 1) * ny + j + 1];
  if (u00 + u11 <= u10 + u01) {
    // split along (0,0)-(1,1)
    if (ty <= tx) return u00 + tx * (u10 - u00) + ty * (u11 - u10);
    return u00 + ty * (u01 - u00) + tx * (u11 - u01);
  }
  // split along (1,0)-(0,1)
  if (tx + ty <= 1.0) return u00 + tx * (u10 - u00) + ty * (u01 - u00);
  return u11 + (1.0 - tx) * (u01 - u11) + (1.0 - ty) * (u10 - u11);
}

std::array<std::array<double, 6>, 2> DensityModel::cell_triangles(
    std::size_t i, std::size_t j) const {
  auto& p = std::get<Tabulated2DP>(params_);
  std::size_t ny = p.ys.size();
  double x0 = p.xs[i], x1 = p.xs[i + 1], y0 = p.ys[j], y1 = p.ys[j + 1];
  double u00 = p.u[i * ny + j], u10 = p.u[(i + 1) * ny + j];
  double u01 = p.u[i * ny + j + 1], u11 = p.u[(i + 1) * ny + j + 1];
  if (u00 + u11 <= u10 + u01) {
    return {{{x0, y0, x1, y0, x1, y1}, {x0, y0, x1, y1, x0, y1}}};
  }
  return {{{x0, y0, x1, y0, x0, y1}, {x1, y0, x1, y1, x0, y1}}};
}

// ---------------------------------------------------------------------------
// check_log_concavity

LogConcavityReport check_log_concavity(const DensityModel& model, int probes,
                                       std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("check_log_concavity: probes >= 1");
  auto box = model.probe_box();
  int n = model.dim();
  LogConcavityReport rep;
  rep.min_residual = kInf;
  SampleRng rng(seed, stream_id("log-concavity-probes"), 0);
  std::vector<double> x(n), y(n), mid(n);
  int tested = 0;
  long attempts = 0;
  const long max_attempts = 200L * probes + 1000;
  while (tested < probes && attempts < max_attempts) {
    ++attempts;
    for (int i = 0; i < n; ++i) {
      x[i] = box[i].first + (box[i].second - box[i].first) * rng.u01();
      y[i] = box[i].first + (box[i].second - box[i].first) * rng.u01();
    }
    double ux = model.potential(x);
    double uy = model.potential(y);
    if (ux == kInf || uy == kInf) continue;  // both endpoints must be inside
    double t = rng.u01_open();
    for (int i = 0; i < n; ++i) mid[i] = t * x[i] + (1.0 - t) * y[i];
    double um = model.potential(mid);
    double residual = t * ux + (1.0 - t) * uy - um;  // -inf if support gap
    rep.min_residual = std::min(rep.min_residual, residual);
    ++tested;
  }
  rep.pairs_tested = tested;
  rep.pass = tested == probes && rep.min_residual >= -1e-9;
  return rep;
}

// ---------------------------------------------------------------------------
// decreasing_rearrangement_1d

namespace {

// Width of the sublevel set {U <= level} for a convex 1D potential.
double sublevel_width(const Density1D& d, double level, double mode) {
  auto solve_branch = [&](int dir) {
    // dir = +1: right branch, -1: left branch.
    double limit = dir > 0 ? d.support_hi() : d.support_lo();
    if (std::isfinite(limit) && d.potential(limit) <= level)
      return std::abs(limit - mode);
    double step = 1.0, inside = 0.0, outside = -1.0;
    for (int i = 0; i < 400; ++i) {
      double t = inside + step;
      double xx = mode + dir * t;
      if ((dir > 0 && xx >= limit) || (dir < 0 && xx <= limit)) {
        outside = std::abs(limit - mode);
        break;
      }
      if (d.potential(xx) > level) {
        outside = t;
        break;
      }
      inside = t;
      step *= 2.0;
    }
    if (outside < 0.0) return inside;  // ran out of range (cannot happen for
                                       // integrable potentials)
    for (int i = 0; i < 100; ++i) {
      double mid2 = 0.5 * (inside + outside);
      if (d.potential(mode + dir * mid2) <= level)
        inside = mid2;
      else
        outside = mid2;
    }
    return 0.5 * (inside + outside);
  };
  return solve_branch(+1) + solve_branch(-1);
}

}  // namespace

Density1D decreasing_rearrangement_1d(const Density1D& d, int half_grid) {
  if (half_grid < 8)
    throw std::invalid_argument("decreasing_rearrangement_1d: grid too small");
  double m = d.mode();
  double u_min = d.potential(m);
  const double depth = 40.0;  // levels beyond u_min+40 carry ~1e-16 mass
  double u_cut = u_min + depth;
  double s_max = 0.5 * sublevel_width(d, u_cut, m);
  // Invert width(u) = 2 s on a uniform radius grid; width is nondecreasing in
  // u, so bisection lands on the exact rearranged potential level.
  std::vector<double> radius(half_grid + 1), level(half_grid + 1);
  for (int k = 0; k <= half_grid; ++k) {
    double s = s_max * k / half_grid;
    radius[k] = s;
    if (k == 0) {
      level[k] = u_min;
      continue;
    }
    double lo = u_min, hi = u_cut;
    for (int it = 0; it < 100; ++it) {
      double mid2 = 0.5 * (lo + hi);
      if (sublevel_width(d, mid2, m) >= 2.0 * s)
        hi = mid2;
      else
        lo = mid2;
    }
    level[k] = 0.5 * (lo + hi);
  }
  std::vector<double> xs(2 * half_grid + 1), us(2 * half_grid + 1);
  for (int k = 0; k <= half_grid; ++k) {
    xs[half_grid + k] = radius[k];
    us[half_grid + k] = level[k];
    xs[half_grid - k] = -radius[k];
    us[half_grid - k] = level[k];
  }
  return Density1D::tabulated(std::move(xs), std::move(us));
}

// ---------------------------------------------------------------------------
// normalizing constants

QuadResult normalizing_constant_1d(const Fn1D& potential, double lo, double hi,
                                   double mode_hint, double rel_tol) {
  double u_min = potential(mode_hint);
  Fn1D w_right = [&](double x) { return potential(x); };
  Fn1D w_left = [&](double t) { return potential(mode_hint - (t - mode_hint)); };
  double cut_hi = find_tail_cut(w_right, mode_hint, u_min, 745.0, hi);
  double cut_lo_r = find_tail_cut(w_left, mode_hint, u_min, 745.0,
                                  mode_hint + (mode_hint - lo));
  double cut_lo = mode_hint - (cut_lo_r - mode_hint);
  std::vector<double> bp = {cut_lo, mode_hint, cut_hi};
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  Fn1D f = [&](double x) { return std::exp(-potential(x)); };
  QuadResult r = integrate_adaptive(f, bp, rel_tol, 0.0);
  return r;
}

QuadResult normalizing_constant_gauge(const GaugeSpec& gauge, double rel_tol) {
  // Radial decomposition: ∫ exp(-φ) = n·Vol{φ<=1}·∫ t^{n-1} e^{-t} dt.
  int n = gauge.n;
  Fn1D f;
  Fn1D w;  // exponent of the radial integrand, +inf-safe
  double mode;
  if (n == 1) {
    f = [](double t) { return std::exp(-t); };
    w = [](double t) { return t; };
    mode = 0.0;
  } else {
    f = [n](double t) {
      return t > 0.0 ? std::exp((n - 1) * std::log(t) - t) : 0.0;
    };
    w = [n](double t) {
      return t > 0.0 ? t - (n - 1) * std::log(t) : kInf;
    };
    mode = static_cast<double>(n - 1);
  }
  double w_min = w(std::max(mode, 1e-12));
  double hi = find_tail_cut(w, std::max(mode, 1.0), w_min, 745.0, kInf);
  std::vector<double> bp = {0.0, std::max(mode, 1.0), hi};
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  QuadResult r = integrate_adaptive(f, bp, rel_tol, 0.0);
  double c = n * gauge.unit_ball_volume();
  r.value *= c;
  r.abs_error *= c;
  return r;
}

}  // namespace infoconc
