#include <cstddef>
#include <limits>

#include "infoconc/kernels/simd.hpp"

#if defined(INFOCONC_HAVE_AVX2_BUILD)
#include <immintrin.h>

namespace infoconc::kernels::avx2 {

// One __m256d register = the 4 scalar lanes of the reference kernel.
// Lane combination and tail handling match reduce_scalar.cpp exactly.

namespace {
inline double combine_lanes_add(__m256d acc) {
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}
}  // namespace

double lane_sum(const double* p, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(p + i));
  double s = combine_lanes_add(acc);
  for (; i < n; ++i) s += p[i];
  return s;
}

void lane_central_sums(const double* p, std::size_t n, double c,
                       double out[4]) {
  __m256d vc = _mm256_set1_pd(c);
  __m256d s1 = _mm256_setzero_pd();
  __m256d s2 = s1, s3 = s1, s4 = s1;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), vc);
    __m256d d2 = _mm256_mul_pd(d, d);
    s1 = _mm256_add_pd(s1, d);
    s2 = _mm256_add_pd(s2, d2);
    s3 = _mm256_add_pd(s3, _mm256_mul_pd(d2, d));
    s4 = _mm256_add_pd(s4, _mm256_mul_pd(d2, d2));
  }
  out[0] = combine_lanes_add(s1);
  out[1] = combine_lanes_add(s2);
  out[2] = combine_lanes_add(s3);
  out[3] = combine_lanes_add(s4);
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
  __m256d vt = _mm256_set1_pd(thr);
  std::size_t k = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(p + i), vt, _CMP_GE_OQ);
    k += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i) k += (p[i] >= thr) ? 1u : 0u;
  return k;
}

std::size_t lane_count_le(const double* p, std::size_t n, double thr) {
  __m256d vt = _mm256_set1_pd(thr);
  std::size_t k = 0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d cmp = _mm256_cmp_pd(_mm256_loadu_pd(p + i), vt, _CMP_LE_OQ);
    k += static_cast<std::size_t>(__builtin_popcount(_mm256_movemask_pd(cmp)));
  }
  for (; i < n; ++i) k += (p[i] <= thr) ? 1u : 0u;
  return k;
}

double lane_max(const double* p, std::size_t n) {
  __m256d acc = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_max_pd(acc, _mm256_loadu_pd(p + i));
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double a = lanes[0] > lanes[1] ? lanes[0] : lanes[1];
  double b = lanes[2] > lanes[3] ? lanes[2] : lanes[3];
  double m = a > b ? a : b;
  for (; i < n; ++i) m = p[i] > m ? p[i] : m;
  return m;
}

}  // namespace infoconc::kernels::avx2

#else  // stub when AVX2 is not part of this build

namespace infoconc::kernels::avx2 {
double lane_sum(const double* p, std::size_t n) {
  return scalar::lane_sum(p, n);
}
void lane_central_sums(const double* p, std::size_t n, double c,
                       double out[4]) {
  scalar::lane_central_sums(p, n, c, out);
}
std::size_t lane_count_ge(const double* p, std::size_t n, double thr) {
  return scalar::lane_count_ge(p, n, thr);
}
std::size_t lane_count_le(const double* p, std::size_t n, double thr) {
  return scalar::lane_count_le(p, n, thr);
}
double lane_max(const double* p, std::size_t n) {
  return scalar::lane_max(p, n);
}
}  // namespace infoconc::kernels::avx2

#endif
