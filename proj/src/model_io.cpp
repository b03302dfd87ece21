#include "infoconc/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace infoconc::io {

namespace {

using nlohmann::json;

Density1D factor_from_json(const json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "gaussian")
    return Density1D::gaussian(j.at("mu").get<double>(),
                               j.at("sigma").get<double>());
  if (kind == "exponential")
    return Density1D::exponential(j.at("rate").get<double>());
  if (kind == "gamma") return Density1D::gamma(j.at("shape").get<double>());
  if (kind == "uniform")
    return Density1D::uniform(j.at("a").get<double>(), j.at("b").get<double>());
  if (kind == "tabulated") {
    if (j.contains("csv")) return tabulated_from_csv(j.at("csv").get<std::string>());
    return Density1D::tabulated(j.at("x").get<std::vector<double>>(),
                                j.at("u").get<std::vector<double>>());
  }
  throw std::invalid_argument("model config: unknown factor kind '" + kind + "'");
}

GaugeKind gauge_kind_from_name(const std::string& g) {
  if (g == "l1") return GaugeKind::L1;
  if (g == "l1sym") return GaugeKind::L1Sym;
  if (g == "l2") return GaugeKind::L2;
  if (g == "linf") return GaugeKind::Linf;
  if (g == "wl1" || g == "weighted-l1") return GaugeKind::WeightedL1;
  throw std::invalid_argument("model config: unknown gauge '" + g + "'");
}

DensityModel model_from_json(const json& j) {
  std::string structure = j.at("structure").get<std::string>();
  std::string id = j.value("id", std::string());
  if (structure == "product") {
    std::vector<Density1D> factors;
    for (const auto& f : j.at("factors")) factors.push_back(factor_from_json(f));
    return DensityModel::product(std::move(factors), id);
  }
  if (structure == "homogeneous") {
    int n = j.at("n").get<int>();
    GaugeKind kind = gauge_kind_from_name(j.at("gauge").get<std::string>());
    std::vector<double> weights;
    if (j.contains("weights")) weights = j.at("weights").get<std::vector<double>>();
    return DensityModel::homogeneous(GaugeSpec::make(kind, n, std::move(weights)),
                                     id);
  }
  if (structure == "gaussian_iso")
    return DensityModel::gaussian_iso(j.at("n").get<int>());
  if (structure == "tabulated2d") {
    auto xs = j.at("x").get<std::vector<double>>();
    auto ys = j.at("y").get<std::vector<double>>();
    auto rows = j.at("u").get<std::vector<std::vector<double>>>();
    if (rows.size() != xs.size())
      throw std::invalid_argument("tabulated2d config: u must have one row per x");
    std::vector<double> u;
    u.reserve(xs.size() * ys.size());
    for (const auto& row : rows) {
      if (row.size() != ys.size())
        throw std::invalid_argument("tabulated2d config: row length != |y|");
      u.insert(u.end(), row.begin(), row.end());
    }
    return DensityModel::tabulated2d(std::move(xs), std::move(ys), std::move(u),
                                     id);
  }
  throw std::invalid_argument("model config: unknown structure '" + structure +
                              "'");
}

}  // namespace

DensityModel model_from_json_string(const std::string& text) {
  return model_from_json(json::parse(text));
}

DensityModel model_from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model config: " + path);
  json j;
  in >> j;
  return model_from_json(j);
}

Density1D tabulated_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open potential CSV: " + path);
  std::vector<double> xs, us;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    for (char& ch : line)
      if (ch == ',' || ch == ';' || ch == '\t') ch = ' ';
    std::istringstream ls(line);
    double x, u;
    if (ls >> x >> u) {
      xs.push_back(x);
      us.push_back(u);
    }
    // non-numeric rows (headers) are skipped
  }
  if (xs.size() < 2)
    throw std::runtime_error("potential CSV has fewer than 2 numeric rows: " +
                             path);
  return Density1D::tabulated(std::move(xs), std::move(us));
}

namespace {

std::vector<double> cycle_weights(int n) {
  const double base[4] = {0.5, 1.5, 1.0, 2.0};
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = base[i % 4];
  return w;
}

Density1D laplace_tabulated() {
  // |x| on [-20, 20]; the node at 0 makes the kink exact.
  std::vector<double> xs, us;
  for (int i = 0; i <= 400; ++i) {
    double x = -20.0 + 40.0 * i / 400.0;
    xs.push_back(x);
    us.push_back(std::abs(x));
  }
  return Density1D::tabulated(std::move(xs), std::move(us));
}

Density1D asym_tabulated() {
  // max(x, -3x): one-kink asymmetric potential, exactly piecewise linear.
  return Density1D::tabulated({-10.0, 0.0, 30.0}, {30.0, 0.0, 30.0});
}

DensityModel bowl_2d() {
  // Separable x^2/2 + |y| on [-8, 8]^2: the per-cell triangulated
  // interpolant of a separable convex potential is exactly convex.
  std::vector<double> xs, ys;
  for (int i = 0; i <= 32; ++i) {
    xs.push_back(-8.0 + 16.0 * i / 32.0);
    ys.push_back(-8.0 + 16.0 * i / 32.0);
  }
  std::vector<double> u(xs.size() * ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < ys.size(); ++j)
      u[i * ys.size() + j] = 0.5 * xs[i] * xs[i] + std::abs(ys[j]);
  return DensityModel::tabulated2d(std::move(xs), std::move(ys), std::move(u),
                                   "bowl-2d");
}

}  // namespace

DensityModel catalog_model(const std::string& name, int dim,
                           double gamma_shape) {
  if (dim < 1) throw std::invalid_argument("catalog_model: dim >= 1");
  std::string suffix = "-n" + std::to_string(dim);
  if (name == "gaussian-iso") return DensityModel::gaussian_iso(dim);
  if (name == "exp-product")
    return DensityModel::product(
        std::vector<Density1D>(dim, Density1D::exponential(1.0)),
        "exp-product" + suffix);
  if (name == "gamma-product")
    return DensityModel::product(
        std::vector<Density1D>(dim, Density1D::gamma(gamma_shape)),
        "gamma-product" + suffix);
  if (name == "uniform-box")
    return DensityModel::product(
        std::vector<Density1D>(dim, Density1D::uniform(0.0, 1.0)),
        "uniform-box" + suffix);
  if (name == "mixed-product") {
    std::vector<Density1D> fs;
    for (int i = 0; i < dim; ++i) {
      switch (i % 4) {
        case 0:
          fs.push_back(Density1D::gaussian(0.0, 1.0));
          break;
        case 1:
          fs.push_back(Density1D::exponential(1.0));
          break;
        case 2:
          fs.push_back(Density1D::gamma(gamma_shape));
          break;
        default:
          fs.push_back(Density1D::uniform(0.0, 1.0));
          break;
      }
    }
    return DensityModel::product(std::move(fs), "mixed-product" + suffix);
  }
  if (name == "homog-l1")
    return DensityModel::homogeneous(GaugeSpec::make(GaugeKind::L1, dim));
  if (name == "homog-l1sym")
    return DensityModel::homogeneous(GaugeSpec::make(GaugeKind::L1Sym, dim));
  if (name == "homog-l2")
    return DensityModel::homogeneous(GaugeSpec::make(GaugeKind::L2, dim));
  if (name == "homog-linf")
    return DensityModel::homogeneous(GaugeSpec::make(GaugeKind::Linf, dim));
  if (name == "homog-wl1")
    return DensityModel::homogeneous(
        GaugeSpec::make(GaugeKind::WeightedL1, dim, cycle_weights(dim)));
  if (name == "laplace-tab") {
    if (dim != 1)
      throw std::invalid_argument("laplace-tab is one-dimensional");
    return DensityModel::product({laplace_tabulated()}, "laplace-tab");
  }
  if (name == "asym-tab") {
    if (dim != 1) throw std::invalid_argument("asym-tab is one-dimensional");
    return DensityModel::product({asym_tabulated()}, "asym-tab");
  }
  if (name == "bowl-2d") {
    if (dim != 2) throw std::invalid_argument("bowl-2d is two-dimensional");
    return bowl_2d();
  }
  throw std::invalid_argument("unknown catalog model '" + name +
                              "' (see catalog_names())");
}

std::vector<std::string> catalog_names() {
  return {"gaussian-iso", "exp-product",  "gamma-product", "uniform-box",
          "mixed-product", "homog-l1",    "homog-l1sym",   "homog-l2",
          "homog-linf",    "homog-wl1",   "laplace-tab",   "asym-tab",
          "bowl-2d"};
}

std::vector<DensityModel> default_catalog(int n) {
  std::vector<DensityModel> out;
  for (const char* name :
       {"gaussian-iso", "exp-product", "gamma-product", "uniform-box",
        "mixed-product", "homog-l1", "homog-l1sym", "homog-l2", "homog-linf",
        "homog-wl1"})
    out.push_back(catalog_model(name, n));
  if (n == 1) {
    out.push_back(catalog_model("laplace-tab", 1));
    out.push_back(catalog_model("asym-tab", 1));
  }
  if (n == 2) out.push_back(catalog_model("bowl-2d", 2));
  return out;
}

std::vector<DensityModel> sampleable_catalog(int n) {
  std::vector<DensityModel> out;
  for (auto& m : default_catalog(n))
    if (m.structure() != DensityModel::Structure::Tabulated2D)
      out.push_back(std::move(m));
  return out;
}

}  // namespace infoconc::io
