#include "infoconc/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "infoconc/kernels/simd.hpp"
#include "infoconc/parallel.hpp"
#include "infoconc/rng.hpp"

namespace infoconc::sampling {

namespace {

// Sequential word view over a preloaded keystream chunk. Mirrors SampleRng's
// derived-value logic exactly; the words themselves come from the same
// counters, so both paths yield identical draws.
class BufferRng {
 public:
  BufferRng(const std::uint64_t* words, std::size_t count)
      : words_(words), count_(count) {}

  std::uint64_t next_u64() {
    if (pos_ >= count_)
      throw std::logic_error("BufferRng: keystream budget exceeded");
    return words_[pos_++];
  }
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double u01_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = u01_open();
    double v = u01();
    double r = std::sqrt(-2.0 * std::log(u));
    double a = 2.0 * std::numbers::pi * v;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }
  double gamma(double) {
    throw std::logic_error("gamma draws use the per-sample path");
  }

 private:
  const std::uint64_t* words_;
  std::size_t count_;
  std::size_t pos_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

struct InvCdfTable {
  const TabulatedP* p = nullptr;
  std::vector<double> prefix;  // normalized cumulative mass at segment starts
  double z = 1.0;
};

InvCdfTable build_inv_cdf(const TabulatedP& p) {
  InvCdfTable t;
  t.p = &p;
  t.z = std::exp(p.log_norm);
  t.prefix.resize(p.seg_mass.size() + 1);
  t.prefix[0] = 0.0;
  for (std::size_t i = 0; i < p.seg_mass.size(); ++i)
    t.prefix[i + 1] = t.prefix[i] + p.seg_mass[i] / t.z;
  t.prefix.back() = 1.0;
  return t;
}

// Exact inverse CDF for a piecewise-linear potential: the in-segment mass
// function inverts in closed form through log1p/expm1.
double inv_cdf_tabulated(const InvCdfTable& t, double v) {
  const auto& p = *t.p;
  auto it = std::upper_bound(t.prefix.begin(), t.prefix.end(), v);
  std::size_t k = std::max<std::ptrdiff_t>(it - t.prefix.begin() - 1, 0);
  if (k >= p.seg_mass.size()) k = p.seg_mass.size() - 1;
  double resid_raw = (v - t.prefix[k]) * t.z;  // raw mass inside segment k
  double len = p.x[k + 1] - p.x[k];
  double s = (p.u[k + 1] - p.u[k]) / len;
  double eu = std::exp(p.u[k]);
  double dt;
  if (s == 0.0) {
    dt = resid_raw * eu;
  } else if (s > 0.0) {
    dt = -std::log1p(-resid_raw * s * eu) / s;
  } else {
    dt = std::log1p(-resid_raw * s * eu) / (-s);
  }
  return p.x[k] + std::min(dt, len);
}

template <class Rng>
double draw_factor(const Density1D& f, Rng& rng, const InvCdfTable* table) {
  switch (f.kind()) {
    case Density1D::Kind::Gaussian: {
      const auto& p = std::get<GaussianP>(f.params());
      return p.mu + p.sigma * rng.normal();
    }
    case Density1D::Kind::Exponential: {
      const auto& p = std::get<ExponentialP>(f.params());
      return p.loc - std::log1p(-rng.u01()) / p.rate;
    }
    case Density1D::Kind::Gamma: {
      const auto& p = std::get<GammaP>(f.params());
      return p.loc + rng.gamma(p.shape) / p.rate;
    }
    case Density1D::Kind::Uniform: {
      const auto& p = std::get<UniformP>(f.params());
      return p.a + (p.b - p.a) * rng.u01();
    }
    case Density1D::Kind::Tabulated:
      return inv_cdf_tabulated(*table, rng.u01());
  }
  throw std::logic_error("draw_factor: unreachable");
}

struct ModelSampler {
  const DensityModel* model = nullptr;
  std::vector<InvCdfTable> tables;      // per factor (tabulated kinds only)
  std::uint64_t stream = 0;
  // Bulk keystream path (fixed word consumption per sample).
  bool bulk = false;
  std::uint32_t words_per_sample = 0;

  template <class Rng>
  double draw(Rng& rng, double* point_out) const {
    const DensityModel& mdl = *model;
    switch (mdl.structure()) {
      case DensityModel::Structure::Product: {
        const auto& fac = std::get<ProductP>(mdl.params()).factors;
        double htilde = 0.0;
        for (std::size_t j = 0; j < fac.size(); ++j) {
          double x = draw_factor(fac[j], rng, tables[j].p ? &tables[j] : nullptr);
          htilde += fac[j].potential(x);
          if (point_out) point_out[j] = x;
        }
        return htilde;
      }
      case DensityModel::Structure::GaussianIso: {
        int n = mdl.dim();
        double sq = 0.0;
        for (int j = 0; j < n; ++j) {
          double x = rng.normal();
          sq += x * x;
          if (point_out) point_out[j] = x;
        }
        return 0.5 * n * std::log(2.0 * std::numbers::pi) + 0.5 * sq;
      }
      default:
        throw std::logic_error("draw: structure handled elsewhere");
    }
  }

  // Homogeneous models: Y = φ(X) ~ Gamma(n,1), direction by cone measure.
  double draw_homogeneous(SampleRng& rng, double* point_out) const {
    const auto& hp = std::get<HomogeneousP>(model->params());
    int n = model->dim();
    double y = rng.gamma(static_cast<double>(n));
    if (point_out) {
      double c = hp.scale;
      switch (hp.gauge.kind) {
        case GaugeKind::L2: {
          double norm2 = 0.0;
          for (int j = 0; j < n; ++j) {
            point_out[j] = rng.normal();
            norm2 += point_out[j] * point_out[j];
          }
          double denom = c * std::sqrt(norm2);
          for (int j = 0; j < n; ++j) point_out[j] *= y / denom;
          break;
        }
        case GaugeKind::L1:
        case GaugeKind::L1Sym:
        case GaugeKind::WeightedL1: {
          double sum = 0.0;
          for (int j = 0; j < n; ++j) {
            point_out[j] = rng.exponential();
            sum += point_out[j];
          }
          for (int j = 0; j < n; ++j) {
            double w = hp.gauge.kind == GaugeKind::WeightedL1
                           ? hp.gauge.weights[j]
                           : 1.0;
            point_out[j] *= y / (c * w * sum);
            if (hp.gauge.kind == GaugeKind::L1Sym && rng.u01() < 0.5)
              point_out[j] = -point_out[j];
          }
          break;
        }
        case GaugeKind::Linf: {
          int axis = std::min<int>(static_cast<int>(rng.u01() * n), n - 1);
          double sign = rng.u01() < 0.5 ? -1.0 : 1.0;
          for (int j = 0; j < n; ++j)
            point_out[j] = (2.0 * rng.u01() - 1.0) * y / c;
          point_out[axis] = sign * y / c;
          break;
        }
      }
    }
    return y;  // h~ = φ_norm(X) = Y for normalized gauges
  }
};

std::uint32_t fixed_words_per_sample(const DensityModel& m) {
  // Box-Muller consumes 2 words per generated pair; the spare is cached, so
  // g normal draws consume 2*ceil(g/2) words.
  switch (m.structure()) {
    case DensityModel::Structure::GaussianIso: {
      int pairs = (m.dim() + 1) / 2;
      return static_cast<std::uint32_t>(2 * pairs);
    }
    case DensityModel::Structure::Product: {
      int normals = 0;
      std::uint32_t others = 0;
      for (const auto& f : std::get<ProductP>(m.params()).factors) {
        switch (f.kind()) {
          case Density1D::Kind::Gaussian:
            ++normals;
            break;
          case Density1D::Kind::Gamma:
            return 0;  // variable consumption
          default:
            ++others;
            break;
        }
      }
      return static_cast<std::uint32_t>(2 * ((normals + 1) / 2)) + others;
    }
    default:
      return 0;
  }
}

ModelSampler make_sampler(const DensityModel& model) {
  ModelSampler s;
  s.model = &model;
  s.stream = stream_id("sample:" + model.id());
  if (model.structure() == DensityModel::Structure::Tabulated2D)
    throw std::invalid_argument("sample: model '" + model.id() +
                                "' has no exact sampler (tabulated 2D)");
  if (model.structure() == DensityModel::Structure::Product) {
    const auto& fac = std::get<ProductP>(model.params()).factors;
    s.tables.resize(fac.size());
    for (std::size_t j = 0; j < fac.size(); ++j)
      if (fac[j].kind() == Density1D::Kind::Tabulated)
        s.tables[j] = build_inv_cdf(std::get<TabulatedP>(fac[j].params()));
  }
  std::uint32_t wps = fixed_words_per_sample(model);
  if (wps > 0) {
    s.bulk = true;
    s.words_per_sample = wps;
  }
  return s;
}

}  // namespace

SampleBatch sample(const DensityModel& model, std::uint64_t m,
                   std::uint64_t seed, const SampleOptions& opts) {
  if (m < 1) throw std::invalid_argument("sample: m must be >= 1");
  ModelSampler sampler = make_sampler(model);
  SampleBatch batch;
  batch.model_id = model.id();
  batch.m = m;
  batch.seed = seed;
  batch.values.resize(m);
  int n = model.dim();
  if (opts.keep_points) batch.points.emplace(m * static_cast<std::size_t>(n));

  auto body = [&](std::size_t lo, std::size_t hi) {
    if (sampler.bulk) {
      // Whole-chunk keystream via the dispatched (possibly SIMD) generator;
      // word layout matches SampleRng's counters sample by sample.
      std::uint32_t wps = sampler.words_per_sample;
      std::uint32_t bps = (wps + 3) / 4;
      std::vector<std::uint64_t> ks(4ull * bps * (hi - lo));
      kernels::fill_keystream(ks, seed, sampler.stream, lo, bps);
      for (std::size_t i = lo; i < hi; ++i) {
        BufferRng rng(ks.data() + (i - lo) * 4ull * bps, 4ull * bps);
        double* pt = batch.points ? batch.points->data() + i * n : nullptr;
        batch.values[i] = sampler.draw(rng, pt);
      }
      return;
    }
    for (std::size_t i = lo; i < hi; ++i) {
      SampleRng rng(seed, sampler.stream, i);
      double* pt = batch.points ? batch.points->data() + i * n : nullptr;
      if (model.structure() == DensityModel::Structure::Homogeneous)
        batch.values[i] = sampler.draw_homogeneous(rng, pt);
      else
        batch.values[i] = sampler.draw(rng, pt);
    }
  };
  parallel_for_blocks(m, body, opts.workers, 4096);
  return batch;
}

HVEstimate estimate_entropy_varentropy(const SampleBatch& batch) {
  if (batch.m < 30)
    throw std::invalid_argument("estimate_entropy_varentropy: need m >= 30");
  double m = static_cast<double>(batch.m);
  double mean = kernels::det_sum(batch.values) / m;
  kernels::CentralSums cs = kernels::det_central_sums(batch.values, mean);
  double s2 = cs.s2 / (m - 1.0);  // unbiased sample variance
  double m4 = cs.s4 / m;
  HVEstimate est;
  est.h.estimate = mean;
  est.h.std_error = std::sqrt(std::max(s2, 0.0) / m);
  est.v.estimate = s2;
  // Var(s^2) = (m4 - (m-3)/(m-1) s^4) / m
  double var_s2 = (m4 - (m - 3.0) / (m - 1.0) * s2 * s2) / m;
  est.v.std_error = std::sqrt(std::max(var_s2, 0.0));
  return est;
}

MgfEstimate empirical_mgf(const SampleBatch& batch, double h_ref, double beta) {
  if (beta >= 1.0)
    throw std::domain_error(
        "empirical_mgf: beta >= 1 rejected (extremal value is +inf)");
  std::vector<double> w(batch.m);
  for (std::size_t i = 0; i < batch.values.size(); ++i)
    w[i] = std::exp(beta * (batch.values[i] - h_ref));
  double m = static_cast<double>(batch.m);
  double total = kernels::det_sum(w);
  double mean = total / m;
  kernels::CentralSums cs = kernels::det_central_sums(w, mean);
  MgfEstimate est;
  est.ci.estimate = mean;
  est.ci.std_error = std::sqrt(std::max(cs.s2 / (m - 1.0), 0.0) / m);
  std::size_t top = static_cast<std::size_t>(
      std::max<double>(1.0, std::ceil(0.001 * m)));
  if (top < w.size()) {
    std::nth_element(w.begin(), w.begin() + (w.size() - top), w.end());
    double top_mass = 0.0;
    for (std::size_t i = w.size() - top; i < w.size(); ++i) top_mass += w[i];
    est.heavy_tail = total > 0.0 && top_mass > 0.1 * total;
  }
  return est;
}

EstimateCI empirical_tail(const SampleBatch& batch, double h_ref, double t,
                          TailSide side) {
  if (!(t > 0.0)) throw std::invalid_argument("empirical_tail: t must be > 0");
  double m = static_cast<double>(batch.m);
  std::size_t count = side == TailSide::Upper
                          ? kernels::count_ge(batch.values, h_ref + t)
                          : kernels::count_le(batch.values, h_ref - t);
  EstimateCI ci;
  ci.estimate = static_cast<double>(count) / m;
  ci.std_error = std::sqrt(ci.estimate * (1.0 - ci.estimate) / m);
  return ci;
}

double ks_statistic(std::vector<double> values,
                    const std::function<double(double)>& cdf) {
  std::sort(values.begin(), values.end());
  double m = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double F = cdf(values[i]);
    d = std::max(d, F - static_cast<double>(i) / m);
    d = std::max(d, static_cast<double>(i + 1) / m - F);
  }
  return d;
}

double ks_critical(double alpha_level, std::uint64_t m) {
  double c = std::sqrt(-0.5 * std::log(alpha_level / 2.0));
  return c / std::sqrt(static_cast<double>(m));
}

void write_csv(const SampleBatch& batch, std::ostream& os) {
  os.precision(17);
  for (double v : batch.values) os << v << '\n';
}

namespace {
template <class T>
void put_le(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i)
    buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}
template <class T>
T get_le(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}
}  // namespace

void write_icb(const SampleBatch& batch, std::ostream& os) {
  os.write("ICB1", 4);
  put_le<std::uint32_t>(os, 1);
  put_le<std::uint64_t>(os, batch.m);
  put_le<std::uint64_t>(os, batch.seed);
  for (double v : batch.values) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_le<std::uint64_t>(os, bits);
  }
}

SampleBatch read_icb(std::istream& is) {
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "ICB1", 4) != 0)
    throw std::runtime_error("read_icb: bad magic (expected ICB1)");
  std::uint32_t version = get_le<std::uint32_t>(is);
  if (version != 1)
    throw std::runtime_error("read_icb: unsupported version " +
                             std::to_string(version));
  SampleBatch batch;
  batch.m = get_le<std::uint64_t>(is);
  batch.seed = get_le<std::uint64_t>(is);
  batch.values.resize(batch.m);
  for (std::uint64_t i = 0; i < batch.m; ++i) {
    std::uint64_t bits = get_le<std::uint64_t>(is);
    double v;
    std::memcpy(&v, &bits, 8);
    batch.values[i] = v;
  }
  if (!is) throw std::runtime_error("read_icb: truncated stream");
  return batch;
}

}  // namespace infoconc::sampling
