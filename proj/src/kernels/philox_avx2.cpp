#include <cstddef>

#include "infoconc/kernels/simd.hpp"

#if defined(INFOCONC_HAVE_AVX2_BUILD)
#include <immintrin.h>

namespace infoconc::kernels::avx2 {

// Four Philox4x64 blocks per iteration, one word position per register.
// AVX2 has no 64x64 multiply, so the high/low products are assembled from
// 32x32 partial products (_mm256_mul_epu32 takes the low halves).

namespace {

const __m256i kMask32 = _mm256_set1_epi64x(0xffffffffLL);

inline void mul64(__m256i a, __m256i b, __m256i& hi, __m256i& lo) {
  __m256i a_hi = _mm256_srli_epi64(a, 32);
  __m256i b_hi = _mm256_srli_epi64(b, 32);
  __m256i ll = _mm256_mul_epu32(a, b);
  __m256i lh = _mm256_mul_epu32(a, b_hi);
  __m256i hl = _mm256_mul_epu32(a_hi, b);
  __m256i hh = _mm256_mul_epu32(a_hi, b_hi);
  __m256i cross = _mm256_add_epi64(
      _mm256_srli_epi64(ll, 32),
      _mm256_add_epi64(_mm256_and_si256(lh, kMask32),
                       _mm256_and_si256(hl, kMask32)));
  hi = _mm256_add_epi64(
      hh, _mm256_add_epi64(
              _mm256_srli_epi64(lh, 32),
              _mm256_add_epi64(_mm256_srli_epi64(hl, 32),
                               _mm256_srli_epi64(cross, 32))));
  lo = _mm256_add_epi64(_mm256_slli_epi64(cross, 32),
                        _mm256_and_si256(ll, kMask32));
}

inline void philox4x64_x4(const std::uint64_t c0[4], const std::uint64_t c1[4],
                          const std::uint64_t c2[4], const std::uint64_t c3[4],
                          PhiloxKey key, std::uint64_t out[16]) {
  using namespace infoconc::kernels::detail;
  __m256i x0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c0));
  __m256i x1 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c1));
  __m256i x2 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c2));
  __m256i x3 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(c3));
  __m256i k0 = _mm256_set1_epi64x(static_cast<long long>(key.k0));
  __m256i k1 = _mm256_set1_epi64x(static_cast<long long>(key.k1));
  const __m256i m0 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxM1));
  const __m256i w0 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxW0));
  const __m256i w1 = _mm256_set1_epi64x(static_cast<long long>(kPhiloxW1));
  for (int round = 0; round < 10; ++round) {
    __m256i hi0, lo0, hi1, lo1;
    mul64(x0, m0, hi0, lo0);
    mul64(x2, m1, hi1, lo1);
    __m256i y0 = _mm256_xor_si256(_mm256_xor_si256(hi1, x1), k0);
    __m256i y2 = _mm256_xor_si256(_mm256_xor_si256(hi0, x3), k1);
    x0 = y0;
    x1 = lo1;
    x2 = y2;
    x3 = lo0;
    k0 = _mm256_add_epi64(k0, w0);
    k1 = _mm256_add_epi64(k1, w1);
  }
  alignas(32) std::uint64_t w0s[4], w1s[4], w2s[4], w3s[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(w0s), x0);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w1s), x1);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w2s), x2);
  _mm256_store_si256(reinterpret_cast<__m256i*>(w3s), x3);
  for (int l = 0; l < 4; ++l) {
    out[4 * l + 0] = w0s[l];
    out[4 * l + 1] = w1s[l];
    out[4 * l + 2] = w2s[l];
    out[4 * l + 3] = w3s[l];
  }
}

}  // namespace

void fill_keystream(std::uint64_t* out, std::size_t nblocks, PhiloxKey key,
                    std::uint64_t sample0, std::uint32_t blocks_per_sample) {
  std::size_t b = 0;
  std::uint64_t c0[4], c1[4] = {0, 0, 0, 0}, c2[4], c3[4] = {0, 0, 0, 0};
  for (; b + 4 <= nblocks; b += 4) {
    for (int l = 0; l < 4; ++l) {
      std::uint64_t fb = b + static_cast<std::uint64_t>(l);
      c0[l] = fb % blocks_per_sample;
      c2[l] = sample0 + fb / blocks_per_sample;
    }
    philox4x64_x4(c0, c1, c2, c3, key, out + 4 * b);
  }
  for (; b < nblocks; ++b) {
    PhiloxCtr c;
    c.c0 = b % blocks_per_sample;
    c.c2 = sample0 + b / blocks_per_sample;
    PhiloxBlock blk = philox4x64(c, key);
    for (int w = 0; w < 4; ++w) out[4 * b + w] = blk[w];
  }
}

}  // namespace infoconc::kernels::avx2

#else

namespace infoconc::kernels::avx2 {
void fill_keystream(std::uint64_t* out, std::size_t nblocks, PhiloxKey key,
                    std::uint64_t sample0, std::uint32_t blocks_per_sample) {
  scalar::fill_keystream(out, nblocks, key, sample0, blocks_per_sample);
}
}  // namespace infoconc::kernels::avx2

#endif
