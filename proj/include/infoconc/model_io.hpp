#pragma once

#include <string>
#include <vector>

#include "infoconc/density.hpp"

namespace infoconc::io {

/// Parses a declarative model config:
///   {"structure": "product", "factors": [{"kind": "gaussian", ...}, ...]}
///   {"structure": "homogeneous", "gauge": "l1|l1sym|l2|linf|wl1", "n": 3,
///    "weights": [...]}
///   {"structure": "gaussian_iso", "n": 3}
///   {"structure": "tabulated2d", "x": [...], "y": [...], "u": [[...], ...]}
/// Factor kinds: gaussian(mu, sigma), exponential(rate), gamma(shape),
/// uniform(a, b), tabulated(x[], u[] | csv path). Optional "id".
DensityModel model_from_json_string(const std::string& text);
DensityModel model_from_config_file(const std::string& path);

/// Two-column CSV (x, U); '#' comments and a non-numeric header row are
/// skipped.
Density1D tabulated_from_csv(const std::string& path);

/// Named catalog models used by the CLI and the verification suite.
/// Names: gaussian-iso | exp-product | gamma-product | uniform-box |
/// mixed-product | homog-l1 | homog-l1sym | homog-l2 | homog-linf |
/// homog-wl1 | laplace-tab | asym-tab | bowl-2d.
DensityModel catalog_model(const std::string& name, int dim,
                           double gamma_shape = 2.0);

/// Default verification catalog at dimension n (1D-only members appear when
/// n == 1; the 2D tabulated bowl when n == 2).
std::vector<DensityModel> default_catalog(int n);

/// Members of default_catalog(n) that have exact samplers.
std::vector<DensityModel> sampleable_catalog(int n);

std::vector<std::string> catalog_names();

}  // namespace infoconc::io
