#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "infoconc/quadrature.hpp"

namespace infoconc {

// One-dimensional log-concave densities with exact log-density evaluation.
// All members are normalized at construction; `potential` always refers to
// the normalized potential -log f.

struct GaussianP {
  double mu, sigma;
};
struct ExponentialP {
  double rate;
  double loc = 0.0;  // support [loc, inf)
};
struct GammaP {
  double shape;       // >= 1 (log-concavity)
  double rate = 1.0;  // construction fixes rate 1; tilts/affine images adjust
  double loc = 0.0;
};
struct UniformP {
  double a, b;
};
struct TabulatedP {
  std::vector<double> x;         // strictly increasing grid
  std::vector<double> u;         // raw potential samples, piecewise linear
  double log_norm = 0.0;         // log ∫ exp(-u_pl)
  std::vector<double> seg_mass;  // raw per-segment masses (closed form)
};

class Density1D {
 public:
  enum class Kind { Gaussian, Exponential, Gamma, Uniform, Tabulated };
  using Params =
      std::variant<GaussianP, ExponentialP, GammaP, UniformP, TabulatedP>;

  static Density1D gaussian(double mu, double sigma);
  static Density1D exponential(double rate);
  static Density1D gamma(double shape);  // shape >= 1, scale 1
  static Density1D uniform(double a, double b);
  /// Piecewise-linear convex potential on a grid; +inf outside the range.
  /// Rejects grids whose node-chord convexity residual is below -1e-12.
  static Density1D tabulated(std::vector<double> x, std::vector<double> u);

  Kind kind() const { return kind_; }
  const Params& params() const { return params_; }
  std::string describe() const;

  double log_density(double x) const;  // -inf off support
  double potential(double x) const;    // -log f; +inf off support
  bool in_support(double x) const;     // exact predicate per family
  double support_lo() const;
  double support_hi() const;

  double mode() const;  // argmin of the potential
  double mean() const;
  double log_sup_density() const;

  /// Exact family-preserving tilt: density proportional to f^alpha.
  Density1D tilted(double alpha) const;
  /// Law of scale*X + shift (exact). One-sided families require scale > 0.
  Density1D affine_image(double scale, double shift) const;

  std::optional<double> entropy_closed() const;
  std::optional<double> varentropy_closed() const;

  /// Breakpoints for integrating P(x) exp(-alpha * potential(x)): truncated
  /// support plus interior kinks and the mode.
  std::vector<double> integration_breakpoints(double alpha = 1.0,
                                              double threshold = 745.0) const;
  /// Analytic bound on the mass of exp(-alpha*potential) discarded by the
  /// truncation above.
  double truncation_error_bound(double alpha = 1.0,
                                double threshold = 745.0) const;

 private:
  Density1D(Kind k, Params p) : kind_(k), params_(std::move(p)) {}
  Kind kind_;
  Params params_;
};

// Gauges (Minkowski functionals); positively homogeneous of degree 1.

enum class GaugeKind { L1, L1Sym, L2, Linf, WeightedL1 };

struct GaugeSpec {
  GaugeKind kind = GaugeKind::L2;
  int n = 1;
  std::vector<double> weights;  // WeightedL1 only; all > 0

  static GaugeSpec make(GaugeKind kind, int n, std::vector<double> weights = {});

  double value(std::span<const double> x) const;  // φ before normalization
  bool in_support(std::span<const double> x) const;
  /// Volume of {φ <= 1} intersected with the support cone.
  double unit_ball_volume() const;
  std::string name() const;
};

// n-dimensional models.

struct ProductP {
  std::vector<Density1D> factors;
};
struct HomogeneousP {
  GaugeSpec gauge;
  double scale;  // φ_norm = scale * φ; chosen so ∫ exp(-φ_norm) = 1
};
struct GaussianIsoP {
  int n;
};
struct Tabulated2DP {
  std::vector<double> xs, ys;
  std::vector<double> u;  // row-major: u[i*ys.size()+j] = U(xs[i], ys[j])
  double log_norm = 0.0;
};

class DensityModel {
 public:
  enum class Structure { Product, Homogeneous, GaussianIso, Tabulated2D };
  using Params =
      std::variant<ProductP, HomogeneousP, GaussianIsoP, Tabulated2DP>;

  static DensityModel product(std::vector<Density1D> factors,
                              std::string id = "");
  static DensityModel homogeneous(GaugeSpec gauge, std::string id = "");
  static DensityModel gaussian_iso(int n);
  static DensityModel tabulated2d(std::vector<double> xs, std::vector<double> ys,
                                  std::vector<double> u, std::string id = "");

  Structure structure() const { return structure_; }
  const Params& params() const { return params_; }
  int dim() const { return dim_; }
  const std::string& id() const { return id_; }

  double log_density(std::span<const double> x) const;  // -inf off support
  double potential(std::span<const double> x) const;
  bool in_support(std::span<const double> x) const;

  std::vector<double> mode() const;
  std::vector<double> mean() const;  // closed form; 2D tabulated by quadrature
  double log_sup_density() const;

  /// Probe box covering the effective support (used by randomized checks).
  std::vector<std::pair<double, double>> probe_box() const;

  // Tabulated2D internals, shared with the per-triangle quadrature in the
  // tilt engine. The potential is piecewise linear on a per-cell
  // triangulation split along the lower diagonal (the one whose endpoint
  // average is smaller), which keeps the interpolant convex for the
  // separable potentials in the catalog.
  double potential_2d_raw(double x, double y) const;  // before normalization
  std::array<std::array<double, 6>, 2> cell_triangles(std::size_t i,
                                                      std::size_t j) const;

 private:
  DensityModel(Structure s, Params p, int dim, std::string id)
      : structure_(s), params_(std::move(p)), dim_(dim), id_(std::move(id)) {}
  Structure structure_;
  Params params_;
  int dim_;
  std::string id_;
};

struct LogConcavityReport {
  double min_residual = 0.0;
  bool pass = false;
  int pairs_tested = 0;
};

/// Draws `probes` random in-support pairs and interpolation weights; residual
/// t U(x) + (1-t) U(y) - U(tx + (1-t)y) must stay >= -1e-9. Pairs whose
/// endpoints fall outside the support are redrawn; a midpoint outside the
/// support (non-convex support) fails the check.
LogConcavityReport check_log_concavity(const DensityModel& model, int probes,
                                       std::uint64_t seed);

/// Symmetric decreasing rearrangement of a 1D density, returned as a
/// tabulated density: node k sits at radius s_k with the exact potential
/// level whose sublevel width is 2 s_k, so equimeasurability holds up to the
/// piecewise-linear interpolation error.
Density1D decreasing_rearrangement_1d(const Density1D& d, int half_grid = 2000);

/// ∫ exp(-U) over [lo, hi] by adaptive quadrature with convex-tail
/// truncation; relative error target rel_tol.
QuadResult normalizing_constant_1d(const Fn1D& potential, double lo, double hi,
                                   double mode_hint, double rel_tol = 1e-9);

/// ∫ exp(-φ) for an (unnormalized) gauge via the radial decomposition
/// n·Vol{φ<=1}·∫ t^{n-1} e^{-t} dt with the radial factor integrated
/// numerically.
QuadResult normalizing_constant_gauge(const GaugeSpec& gauge,
                                      double rel_tol = 1e-9);

}  // namespace infoconc
