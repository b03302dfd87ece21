#pragma once

#include <cstddef>
#include <functional>

namespace infoconc {

/// Worker cap: min(hardware, INFOCONC_THREADS) when the env var is set.
/// Always at least 1.
int worker_count();

/// Runs fn(first, last) over fixed-size index blocks pulled by an atomic
/// cursor. Block boundaries do not depend on the worker count, so any
/// per-index output written to disjoint slots is reproducible. `workers` <= 0
/// means worker_count(); workers == 1 runs inline.
void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn,
                         int workers = 0, std::size_t block = 4096);

}  // namespace infoconc
