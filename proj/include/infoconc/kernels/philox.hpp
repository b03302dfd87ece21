#pragma once

#include <array>
#include <cstdint>

namespace infoconc::kernels {

// Philox4x64-10 counter-based generator. Every 256-bit counter maps to an
// independent 256-bit output block, so any consumer that derives its counter
// from (stream, sample index, intra-sample block) gets a reproducible stream
// regardless of evaluation order or worker count.

struct PhiloxKey {
  std::uint64_t k0 = 0;
  std::uint64_t k1 = 0;
};

struct PhiloxCtr {
  std::uint64_t c0 = 0;
  std::uint64_t c1 = 0;
  std::uint64_t c2 = 0;
  std::uint64_t c3 = 0;
};

using PhiloxBlock = std::array<std::uint64_t, 4>;

namespace detail {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo64(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                      std::uint64_t& lo) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace detail

/// Scalar reference implementation (one block).
inline PhiloxBlock philox4x64(PhiloxCtr c, PhiloxKey k) {
  using namespace detail;
  std::uint64_t x0 = c.c0, x1 = c.c1, x2 = c.c2, x3 = c.c3;
  std::uint64_t k0 = k.k0, k1 = k.k1;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo64(kPhiloxM0, x0, hi0, lo0);
    mulhilo64(kPhiloxM1, x2, hi1, lo1);
    std::uint64_t y0 = hi1 ^ x1 ^ k0;
    std::uint64_t y1 = lo1;
    std::uint64_t y2 = hi0 ^ x3 ^ k1;
    std::uint64_t y3 = lo0;
    x0 = y0;
    x1 = y1;
    x2 = y2;
    x3 = y3;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {x0, x1, x2, x3};
}

}  // namespace infoconc::kernels
