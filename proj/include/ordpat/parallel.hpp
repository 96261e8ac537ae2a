#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ordpat {

inline unsigned resolve_threads(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Run fn(shard) for shard = 0..count-1 on a small worker pool. Shards write
// to disjoint slots chosen by index, so results do not depend on the worker
// count. Exceptions are rethrown on the calling thread.
inline void parallel_shards(std::size_t count, int threads,
                            const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(resolve_threads(threads), count);
  if (workers <= 1) {
    for (std::size_t s = 0; s < count; ++s) fn(s);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::size_t s = next.fetch_add(1);
      if (s >= count || failed.load()) return;
      try {
        fn(s);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  pool.clear();  // join
  if (failed.load()) std::rethrow_exception(error);
}

}  // namespace ordpat
