#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "infoconc/density.hpp"

namespace infoconc::verify {

/// Every tolerance used by the suite lives here, never inline at call sites.
struct ToleranceConfig {
  double varentropy_bound = 1e-9;     // V(X) <= n + tol
  double varentropy_equality = 1e-8;  // |V - n| for extremal families
  double tilted_varentropy_bound = 1e-9;
  double tilt_identity_rel = 1e-4;    // |a^2 F'' - V(X_a)| / V
  double f_at_one = 1e-9;             // |F(1)|
  double logg_concavity = 1e-8;       // midpoint residual >= -tol
  double g_constant = 1e-8;           // |G - 1| for homogeneous
  double homog_normalization_2d = 1e-7;
  double mgf_quadrature_rel = 1e-9;   // quadrature MGF <= bound slack
  double extremal_mgf_rel = 1e-6;
  double legendre_identity = 1e-6;
  double max_entropy_slack = 1e-8;
  double equality_slack = 1e-8;       // product-exponential equality cases
  double mode_mean_rel = 1e-9;
  double affine_invariance = 1e-8;
  double rearrangement = 1e-3;
  double sampler_sigma = 3.0;  // SE multiplier for all empirical checks
};

struct SuiteConfig {
  std::string suite = "default";
  std::vector<int> dims = {1, 2, 3, 5, 10};
  std::vector<double> alpha_grid;          // empty = default 40-point grid
  std::vector<double> t_over_n = {0.1, 0.3, 0.5, 1.0};
  std::vector<double> beta_grid = {-2.0, -1.0, -0.5, 0.5, 0.9};
  std::vector<double> small_ball_c = {0.05, 0.2, 0.35};
  std::uint64_t m_samples = 100000;
  std::uint64_t seed = 0xC0FFEE;
  int affine_trials = 20;
  int rearrangement_grid = 2000;
  ToleranceConfig tol;

  static SuiteConfig defaults() { return SuiteConfig{}; }
  std::string to_json_string() const;
  static SuiteConfig from_json_string(const std::string& text);
  static SuiteConfig from_file(const std::string& path);
};

struct CheckRecord {
  std::string check_id;
  std::string model_id;
  std::string params;     // reproduction parameters, human readable
  double measured = 0.0;
  double bound = 0.0;
  double slack = 0.0;     // pass iff slack >= -tolerance
  double tolerance = 0.0;
  bool pass = false;
  double runtime_ms = 0.0;
};

struct VerificationReport {
  std::string suite;
  std::string version = "1";
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;

  bool all_pass() const;
  int failures() const;
  /// Canonical JSON; runtime fields are emitted only when include_runtime.
  std::string to_json_string(bool include_runtime = true) const;
  void print_table(std::ostream& os) const;
};

/// Executes every registered check; failures are collected, never thrown.
VerificationReport run_suite(const SuiteConfig& config);

/// |V(TX) - V(X)| over random diagonal affine maps (scales in [0.1, 10],
/// shifts in [-5, 5]), both sides by quadrature.
CheckRecord check_affine_invariance(const DensityModel& model, int trials,
                                    std::uint64_t seed, double tolerance);

/// h and V of the symmetric decreasing rearrangement vs the original
/// (grid-limited tolerance).
CheckRecord check_rearrangement_invariance(const Density1D& d, int grid_size,
                                           double tolerance);

/// Check ids the default suite must cover (one per verified statement);
/// used by the coverage meta-test.
std::vector<std::string> required_check_ids();

}  // namespace infoconc::verify
