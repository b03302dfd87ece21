#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

#include "infoconc/kernels/philox.hpp"

namespace infoconc {

/// FNV-1a, used to derive independent RNG streams from model/purpose names.
inline std::uint64_t stream_id(std::string_view name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 1099511628211ULL;
  }
  return h;
}

/// Counter-based per-sample generator. The value stream depends only on
/// (seed, stream, sample_index), never on which worker evaluates it or what
/// other samples were drawn before, which is what makes batches reproducible
/// under any thread count.
class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t sample_index)
      : key_{seed, stream}, sample_(sample_index) {}

  std::uint64_t next_u64() {
    if (pos_ == 4) {
      kernels::PhiloxCtr c;
      c.c0 = next_block_++;
      c.c2 = sample_;
      buf_ = kernels::philox4x64(c, key_);
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  /// Uniform on [0,1), 53-bit resolution.
  double u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1); safe under log().
  double u01_open() {
    return (static_cast<double>(next_u64() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// Standard normal (Box-Muller; the spare is cached per sample).
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

  /// Standard exponential.
  double exponential() { return -std::log1p(-u01()); }

  /// Gamma(shape, 1) for shape >= 1 (Marsaglia-Tsang).
  double gamma(double shape) {
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = u01_open();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  kernels::PhiloxKey key_;
  std::uint64_t sample_;
  std::uint64_t next_block_ = 0;
  kernels::PhiloxBlock buf_{};
  int pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace infoconc
