#include <cstddef>
#include <limits>

#include "infoconc/kernels/simd.hpp"

// Scalar reference kernels. The 4-lane strided accumulation mirrors the AVX2
// register layout exactly: lane l holds the running sum of x[4j+l], lanes are
// combined as (l0+l1)+(l2+l3), and the tail is folded in index order. The
// AVX2 variants perform the same operations, so outputs match bit-for-bit.

namespace infoconc::kernels::scalar {

double lane_sum(const double* p, std::size_t n) {
  double a0 = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 += p[i];
    a1 += p[i + 1];
    a2 += p[i + 2];
    a3 += p[i + 3];
  }
  double s = (a0 + a1) + (a2 + a3);
  for (; i < n; ++i) s += p[i];
  return s;
}

void lane_central_sums(const double* p, std::size_t n, double c,
                       double out[4]) {
  double s1[4] = {0, 0, 0, 0};
  double s2[4] = {0, 0, 0, 0};
  double s3[4] = {0, 0, 0, 0};
  double s4[4] = {0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (int l = 0; l < 4; ++l) {
      double d = p[i + l] - c;
      double d2 = d * d;
      s1[l] += d;
      s2[l] += d2;
      s3[l] += d2 * d;
      s4[l] += d2 * d2;
    }
  }
  out[0] = (s1[0] + s1[1]) + (s1[2] + s1[3]);
  out[1] = (s2[0] + s2[1]) + (s2[2] + s2[3]);
  out[2] = (s3[0] + s3[1]) + (s3[2] + s3[3]);
  out[3] = (s4[0] + s4[1]) + (s4[2] + s4[3]);
  for (; i < n; ++i) {
    double d = p[i] - c;
    double d2 = d * d;
    out[0] += d;
    out[1] += d2;
    out[2] += d2 * d;
    out[3] += d2 * d2;
  }
}

std::size_t lane_count_ge(const double* p, std::size_t n, double thr) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) k += (p[i] >= thr) ? 1u : 0u;
  return k;
}

std::size_t lane_count_le(const double* p, std::size_t n, double thr) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) k += (p[i] <= thr) ? 1u : 0u;
  return k;
}

double lane_max(const double* p, std::size_t n) {
  double m0 = -std::numeric_limits<double>::infinity();
  double m1 = m0, m2 = m0, m3 = m0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    m0 = p[i] > m0 ? p[i] : m0;
    m1 = p[i + 1] > m1 ? p[i + 1] : m1;
    m2 = p[i + 2] > m2 ? p[i + 2] : m2;
    m3 = p[i + 3] > m3 ? p[i + 3] : m3;
  }
  double a = m0 > m1 ? m0 : m1;
  double b = m2 > m3 ? m2 : m3;
  double m = a > b ? a : b;
  for (; i < n; ++i) m = p[i] > m ? p[i] : m;
  return m;
}

void fill_keystream(std::uint64_t* out, std::size_t nblocks, PhiloxKey key,
                    std::uint64_t sample0, std::uint32_t blocks_per_sample) {
  for (std::size_t b = 0; b < nblocks; ++b) {
    PhiloxCtr c;
    c.c0 = b % blocks_per_sample;
    c.c1 = 0;
    c.c2 = sample0 + b / blocks_per_sample;
    c.c3 = 0;
    PhiloxBlock blk = philox4x64(c, key);
    out[4 * b + 0] = blk[0];
    out[4 * b + 1] = blk[1];
    out[4 * b + 2] = blk[2];
    out[4 * b + 3] = blk[3];
  }
}

}  // namespace infoconc::kernels::scalar
