#include <cstring>
#include <vector>

#include "doctest.h"
#include "infoconc/kernels/philox.hpp"
#include "infoconc/kernels/simd.hpp"
#include "infoconc/rng.hpp"

using namespace infoconc;
using namespace infoconc::kernels;

namespace {

// Deterministic filler for reduction tests (not the production RNG on
// purpose; any fixed bit pattern will do).
std::vector<double> test_array(std::size_t n, std::uint64_t salt) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    PhiloxCtr c;
    c.c0 = i;
    c.c2 = salt;
    auto b = philox4x64(c, PhiloxKey{42, 7});
    v[i] = (static_cast<double>(b[0] >> 11) * 0x1.0p-53 - 0.5) * 100.0;
  }
  return v;
}

bool avx2_on = backend_usable(Backend::Avx2);

}  // namespace

TEST_CASE("philox4x64 known-answer vectors") {
  // Frozen from an independent reference implementation of Philox4x64-10.
  struct KAT {
    PhiloxCtr c;
    PhiloxKey k;
    PhiloxBlock want;
  };
  const KAT kats[] = {
      {{0, 0, 0, 0},
       {0, 0},
       {0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
        0x7e68b68aec7ba23bULL}},
      {{1, 0, 0, 0},
       {0, 0},
       {0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
        0x907d7a052fd5b4dcULL}},
      {{0xffffffffffffffffULL, 0xffffffffffffffffULL, 0xffffffffffffffffULL,
        0xffffffffffffffffULL},
       {0xffffffffffffffffULL, 0xffffffffffffffffULL},
       {0x87b092c3013fe90bULL, 0x438c3c67be8d0224ULL, 0x9cc7d7c69cd777b6ULL,
        0xa09caebf594f0ba0ULL}},
      {{0x243f6a8885a308d3ULL, 0x13198a2e03707344ULL, 0xa4093822299f31d0ULL,
        0x082efa98ec4e6c89ULL},
       {0x452821e638d01377ULL, 0xbe5466cf34e90c6cULL},
       {0xa528f45403e61d95ULL, 0x38c72dbd566e9788ULL, 0xa5a1610e72fd18b5ULL,
        0x57bd43b5e52b7fe6ULL}},
      {{0xDEADBEEFULL, 0xFACEULL, 0x12345678ULL, 0x9ABCDEF0ULL},
       {0xC0FFEEULL, 0x1234567890ABCDEFULL},
       {0xd46afd23065249c1ULL, 0xbdd96f4f6554bfb4ULL, 0x529377ea1270ba09ULL,
        0x5bff4db2ff6266c1ULL}},
  };
  for (const auto& kat : kats) {
    auto got = philox4x64(kat.c, kat.k);
    CHECK(got == kat.want);
  }
}

TEST_CASE("keystream: scalar and AVX2 produce identical words") {
  if (!avx2_on) {
    MESSAGE("AVX2 not usable on this host; skipping");
    return;
  }
  for (std::size_t nblocks : {1u, 3u, 4u, 5u, 17u, 128u, 1001u}) {
    std::vector<std::uint64_t> a(4 * nblocks), b(4 * nblocks);
    PhiloxKey key{0xC0FFEE, 12345};
    scalar::fill_keystream(a.data(), nblocks, key, 77, 3);
    avx2::fill_keystream(b.data(), nblocks, key, 77, 3);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * 8) == 0);
  }
}

TEST_CASE("keystream matches SampleRng word-for-word") {
  const std::uint32_t bps = 2;  // blocks per sample
  const std::uint64_t seed = 99, stream = 5, sample0 = 10;
  const std::size_t nsamples = 6;
  std::vector<std::uint64_t> ks(4 * bps * nsamples);
  fill_keystream(ks, seed, stream, sample0, bps);
  for (std::size_t s = 0; s < nsamples; ++s) {
    SampleRng rng(seed, stream, sample0 + s);
    for (std::size_t w = 0; w < 4 * bps; ++w) {
      CHECK(rng.next_u64() == ks[s * 4 * bps + w]);
    }
  }
}

TEST_CASE("reductions: scalar/AVX2 bit equality across lengths") {
  if (!avx2_on) {
    MESSAGE("AVX2 not usable on this host; skipping");
    return;
  }
  // Lengths straddling the lane width and the block size.
  const std::size_t lens[] = {0,  1,  2,   3,   4,    5,    7,    8,   15,
                              16, 17, 100, 255, 4095, 4096, 4097, 10000};
  for (std::size_t n : lens) {
    auto v = test_array(n, n + 1);
    double s_sc = scalar::lane_sum(v.data(), n);
    double s_ax = avx2::lane_sum(v.data(), n);
    CHECK(std::memcmp(&s_sc, &s_ax, 8) == 0);

    double m_sc[4], m_ax[4];
    scalar::lane_central_sums(v.data(), n, 0.25, m_sc);
    avx2::lane_central_sums(v.data(), n, 0.25, m_ax);
    CHECK(std::memcmp(m_sc, m_ax, 32) == 0);

    CHECK(scalar::lane_count_ge(v.data(), n, 1.0) ==
          avx2::lane_count_ge(v.data(), n, 1.0));
    CHECK(scalar::lane_count_le(v.data(), n, -1.0) ==
          avx2::lane_count_le(v.data(), n, -1.0));
    if (n > 0) {
      double mx_sc = scalar::lane_max(v.data(), n);
      double mx_ax = avx2::lane_max(v.data(), n);
      CHECK(std::memcmp(&mx_sc, &mx_ax, 8) == 0);
    }
  }
}

TEST_CASE("det_sum identical under forced backends") {
  auto v = test_array(100000, 3);
  double auto_sum = det_sum(v);
  force_backend(Backend::Scalar);
  double s = det_sum(v);
  clear_forced_backend();
  CHECK(std::memcmp(&auto_sum, &s, 8) == 0);
  if (avx2_on) {
    force_backend(Backend::Avx2);
    double a = det_sum(v);
    clear_forced_backend();
    CHECK(std::memcmp(&s, &a, 8) == 0);
  }
}

TEST_CASE("det_central_sums sanity against plain accumulation") {
  auto v = test_array(5000, 9);
  CentralSums cs = det_central_sums(v, 2.0);
  long double s1 = 0, s2 = 0;
  for (double x : v) {
    long double d = static_cast<long double>(x) - 2.0L;
    s1 += d;
    s2 += d * d;
  }
  CHECK(cs.s1 == doctest::Approx(static_cast<double>(s1)).epsilon(1e-12));
  CHECK(cs.s2 == doctest::Approx(static_cast<double>(s2)).epsilon(1e-12));
}

TEST_CASE("count kernels match std::count_if") {
  auto v = test_array(4321, 11);
  std::size_t expect = 0;
  for (double x : v) expect += (x >= 10.0);
  CHECK(count_ge(v, 10.0) == expect);
  expect = 0;
  for (double x : v) expect += (x <= -10.0);
  CHECK(count_le(v, -10.0) == expect);
}
