#include "infoconc/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace infoconc {

int worker_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("INFOCONC_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) return cap;  // an explicit cap may exceed hw
  }
  return hw;
}

void parallel_for_blocks(std::size_t n,
                         const std::function<void(std::size_t, std::size_t)>& fn,
                         int workers, std::size_t block) {
  if (n == 0) return;
  if (workers <= 0) workers = worker_count();
  std::size_t nblocks = (n + block - 1) / block;
  std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), nblocks);
  if (nw <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      std::size_t lo = b * block;
      fn(lo, std::min(lo + block, n));
    }
    return;
  }
  std::atomic<std::size_t> cursor{0};
  auto body = [&] {
    for (;;) {
      std::size_t b = cursor.fetch_add(1, std::memory_order_relaxed);
      if (b >= nblocks) return;
      std::size_t lo = b * block;
      fn(lo, std::min(lo + block, n));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nw - 1);
  for (std::size_t i = 0; i + 1 < nw; ++i) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
}

}  // namespace infoconc
