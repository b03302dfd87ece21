#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "infoconc/density.hpp"

namespace infoconc::sampling {

// Exact Monte Carlo sampling of catalog models and estimation of the
// information-content distribution. Batches are bit-for-bit reproducible
// from (model, m, seed) under any worker count: sample i draws from a
// counter-based stream keyed by (seed, model stream, i).

struct SampleBatch {
  std::string model_id;
  std::uint64_t m = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;  // information content -log f(X_i), all finite
  std::optional<std::vector<double>> points;  // row-major m x n when kept
};

struct SampleOptions {
  bool keep_points = false;
  int workers = 0;  // 0 = worker_count()
};

/// Throws std::invalid_argument for models without an exact sampler
/// (tabulated 2D potentials).
SampleBatch sample(const DensityModel& model, std::uint64_t m,
                   std::uint64_t seed, const SampleOptions& opts = {});

struct EstimateCI {
  double estimate = 0.0;
  double std_error = 0.0;
  double level = 0.99;
};

struct HVEstimate {
  EstimateCI h;
  EstimateCI v;
};

/// Sample mean and unbiased sample variance of the information content with
/// CLT standard errors (the variance SE uses the fourth central moment).
/// Requires m >= 30.
HVEstimate estimate_entropy_varentropy(const SampleBatch& batch);

struct MgfEstimate {
  EstimateCI ci;
  /// Set when the top 0.1% of summands carries more than 10% of the mass
  /// (empirical MGF near beta = 1 is dominated by rare samples).
  bool heavy_tail = false;
};

/// Mean of exp(beta (h~_i - h_ref)). beta >= 1 is rejected: the extremal
/// value is +inf there.
MgfEstimate empirical_mgf(const SampleBatch& batch, double h_ref, double beta);

enum class TailSide { Upper, Lower };

/// Empirical frequency of {h~ - h_ref >= t} (Upper) or {<= -t} (Lower) with
/// binomial standard error.
EstimateCI empirical_tail(const SampleBatch& batch, double h_ref, double t,
                          TailSide side);

/// Kolmogorov-Smirnov statistic of `values` against `cdf` (values copied and
/// sorted internally).
double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf);
/// Asymptotic critical value at significance `alpha_level`.
double ks_critical(double alpha_level, std::uint64_t m);

// Batch serialization: CSV (one value per row) and the ICB1 binary format
// (magic "ICB1", little-endian u32 version, u64 m, u64 seed, m float64).
void write_csv(const SampleBatch& batch, std::ostream& os);
void write_icb(const SampleBatch& batch, std::ostream& os);
SampleBatch read_icb(std::istream& is);

}  // namespace infoconc::sampling
