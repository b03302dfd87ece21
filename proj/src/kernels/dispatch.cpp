#include <atomic>
#include <stdexcept>
#include <vector>

#include "infoconc/kernels/simd.hpp"

namespace infoconc::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

std::atomic<int> g_forced{-1};  // -1 = auto

Backend resolve() {
  int f = g_forced.load(std::memory_order_relaxed);
  if (f >= 0) return static_cast<Backend>(f);
  if (backend_usable(Backend::Avx2)) return Backend::Avx2;
  return Backend::Scalar;
}

// Fixed block size for the deterministic reduction tree. Partial results per
// block are combined in block order, so chunk-parallel callers that fill
// disjoint blocks always reproduce the serial result.
constexpr std::size_t kBlock = 4096;

double dispatch_lane_sum(const double* p, std::size_t n, Backend be) {
  return be == Backend::Avx2 ? avx2::lane_sum(p, n) : scalar::lane_sum(p, n);
}

}  // namespace

bool backend_compiled(Backend be) {
  if (be == Backend::Scalar) return true;
#if defined(INFOCONC_HAVE_AVX2_BUILD)
  return true;
#else
  return false;
#endif
}

bool backend_usable(Backend be) {
  if (be == Backend::Scalar) return true;
  return backend_compiled(be) && cpu_has_avx2();
}

Backend active_backend() { return resolve(); }

void force_backend(Backend be) {
  if (!backend_usable(be))
    throw std::invalid_argument("kernels: backend not usable on this host: " +
                                backend_name(be));
  g_forced.store(static_cast<int>(be), std::memory_order_relaxed);
}

void clear_forced_backend() { g_forced.store(-1, std::memory_order_relaxed); }

std::string backend_name(Backend be) {
  switch (be) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "?";
}

double det_sum(std::span<const double> x) {
  Backend be = resolve();
  if (x.size() <= kBlock) return dispatch_lane_sum(x.data(), x.size(), be);
  std::vector<double> partials;
  partials.reserve((x.size() + kBlock - 1) / kBlock);
  for (std::size_t off = 0; off < x.size(); off += kBlock) {
    std::size_t len = std::min(kBlock, x.size() - off);
    partials.push_back(dispatch_lane_sum(x.data() + off, len, be));
  }
  return det_sum(partials);
}

CentralSums det_central_sums(std::span<const double> x, double center) {
  Backend be = resolve();
  CentralSums total;
  for (std::size_t off = 0; off < x.size(); off += kBlock) {
    std::size_t len = std::min(kBlock, x.size() - off);
    double part[4];
    if (be == Backend::Avx2)
      avx2::lane_central_sums(x.data() + off, len, center, part);
    else
      scalar::lane_central_sums(x.data() + off, len, center, part);
    total.s1 += part[0];
    total.s2 += part[1];
    total.s3 += part[2];
    total.s4 += part[3];
  }
  return total;
}

std::size_t count_ge(std::span<const double> x, double threshold) {
  Backend be = resolve();
  return be == Backend::Avx2 ? avx2::lane_count_ge(x.data(), x.size(), threshold)
                             : scalar::lane_count_ge(x.data(), x.size(), threshold);
}

std::size_t count_le(std::span<const double> x, double threshold) {
  Backend be = resolve();
  return be == Backend::Avx2 ? avx2::lane_count_le(x.data(), x.size(), threshold)
                             : scalar::lane_count_le(x.data(), x.size(), threshold);
}

double max_value(std::span<const double> x) {
  Backend be = resolve();
  return be == Backend::Avx2 ? avx2::lane_max(x.data(), x.size())
                             : scalar::lane_max(x.data(), x.size());
}

void fill_keystream(std::span<std::uint64_t> out, std::uint64_t seed,
                    std::uint64_t stream, std::uint64_t sample0,
                    std::uint32_t blocks_per_sample) {
  if (out.size() % 4 != 0)
    throw std::invalid_argument("fill_keystream: output size must be 4*nblocks");
  PhiloxKey key{seed, stream};
  std::size_t nblocks = out.size() / 4;
  if (resolve() == Backend::Avx2)
    avx2::fill_keystream(out.data(), nblocks, key, sample0, blocks_per_sample);
  else
    scalar::fill_keystream(out.data(), nblocks, key, sample0, blocks_per_sample);
}

}  // namespace infoconc::kernels
