#include "infoconc/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace infoconc::analytic {

std::optional<double> entropy_closed(const DensityModel& model) {
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      double s = 0.0;
      for (const auto& f : std::get<ProductP>(model.params()).factors) {
        auto h = f.entropy_closed();
        if (!h) return std::nullopt;
        s += *h;
      }
      return s;
    }
    case DensityModel::Structure::GaussianIso:
      return 0.5 * model.dim() *
             std::log(2.0 * std::numbers::pi * std::numbers::e);
    case DensityModel::Structure::Homogeneous:
      // h = E[φ(X)] = n for a normalized degree-1 gauge.
      return static_cast<double>(model.dim());
    case DensityModel::Structure::Tabulated2D:
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> varentropy_closed(const DensityModel& model) {
  switch (model.structure()) {
    case DensityModel::Structure::Product: {
      double s = 0.0;
      for (const auto& f : std::get<ProductP>(model.params()).factors) {
        auto v = f.varentropy_closed();
        if (!v) return std::nullopt;
        s += *v;
      }
      return s;
    }
    case DensityModel::Structure::GaussianIso:
      return 0.5 * model.dim();
    case DensityModel::Structure::Homogeneous:
      return static_cast<double>(model.dim());
    case DensityModel::Structure::Tabulated2D:
      return std::nullopt;
  }
  return std::nullopt;
}

double GammaLaw::pdf(double t) const {
  if (t < 0.0) return 0.0;
  if (t == 0.0) return n == 1 ? 1.0 : 0.0;
  return std::exp((n - 1) * std::log(t) - t - std::lgamma(n));
}

double GammaLaw::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  // Integer shape: P(Y <= t) = 1 - e^{-t} sum_{k<n} t^k / k!
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < n; ++k) {
    term *= t / k;
    sum += term;
  }
  return -std::expm1(-t + std::log(sum));
}

GammaLaw homogeneous_info_law(const DensityModel& model) {
  if (model.structure() != DensityModel::Structure::Homogeneous)
    throw std::invalid_argument(
        "homogeneous_info_law: model '" + model.id() + "' is not homogeneous");
  return GammaLaw{model.dim()};
}

double F_homogeneous(double alpha, int n) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("F_homogeneous: alpha must be > 0");
  return -n * std::log(alpha);
}

ExtReal mgf_exponential_star(double beta, int n) {
  if (beta >= 1.0) return ExtReal::infinity();
  double r = -beta - std::log1p(-beta);  // r(-beta)
  return ExtReal(std::exp(n * r));
}

}  // namespace infoconc::analytic
