#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "infoconc/kernels/philox.hpp"

namespace infoconc::kernels {

// Runtime-dispatched data-parallel kernels. Every kernel has a scalar
// reference implementation and an AVX2 variant that executes the same
// floating-point operations in the same order, so results are identical
// bit-for-bit across backends. Reductions additionally use a fixed 4-lane /
// fixed-block-tree structure, making them invariant under the worker count.

enum class Backend { Scalar, Avx2 };

/// Compiled into this binary at all (independent of the host CPU).
bool backend_compiled(Backend be);
/// Compiled and supported by the host CPU.
bool backend_usable(Backend be);
/// Backend used by the free functions below; best usable unless forced.
Backend active_backend();
/// Test hook. Throws std::invalid_argument if `be` is not usable.
void force_backend(Backend be);
void clear_forced_backend();
std::string backend_name(Backend be);

/// Sums of (x−c)^p for p = 1..4 (not normalized).
struct CentralSums {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double s4 = 0.0;
};

// Deterministic reductions.
double det_sum(std::span<const double> x);
CentralSums det_central_sums(std::span<const double> x, double center);
std::size_t count_ge(std::span<const double> x, double threshold);
std::size_t count_le(std::span<const double> x, double threshold);
double max_value(std::span<const double> x);  // -inf on empty input

// Philox keystream: out must hold 4*nblocks words. Flat block index b maps to
// counter {b % blocks_per_sample, 0, sample0 + b / blocks_per_sample, 0} with
// key {seed, stream}; this is the same counter scheme SampleRng uses, so bulk
// and per-sample generation agree word-for-word.
void fill_keystream(std::span<std::uint64_t> out, std::uint64_t seed,
                    std::uint64_t stream, std::uint64_t sample0,
                    std::uint32_t blocks_per_sample);

// Per-backend entry points, exposed for equivalence tests.
namespace scalar {
double lane_sum(const double* p, std::size_t n);
void lane_central_sums(const double* p, std::size_t n, double c, double out[4]);
std::size_t lane_count_ge(const double* p, std::size_t n, double thr);
std::size_t lane_count_le(const double* p, std::size_t n, double thr);
double lane_max(const double* p, std::size_t n);
void fill_keystream(std::uint64_t* out, std::size_t nblocks, PhiloxKey key,
                    std::uint64_t sample0, std::uint32_t blocks_per_sample);
}  // namespace scalar

namespace avx2 {
double lane_sum(const double* p, std::size_t n);
void lane_central_sums(const double* p, std::size_t n, double c, double out[4]);
std::size_t lane_count_ge(const double* p, std::size_t n, double thr);
std::size_t lane_count_le(const double* p, std::size_t n, double thr);
double lane_max(const double* p, std::size_t n);
void fill_keystream(std::uint64_t* out, std::size_t nblocks, PhiloxKey key,
                    std::uint64_t sample0, std::uint32_t blocks_per_sample);
}  // namespace avx2

}  // namespace infoconc::kernels
