#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace glauber {

// Worker count: GLAUBER_THREADS if set, else hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("GLAUBER_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs chunk_fn(begin, end) over a partition of [begin, end).  Callers must
// write results to per-index slots (and derive per-index RNG substreams) so
// output does not depend on the partition.
inline void parallel_for_chunks(
    std::int64_t begin, std::int64_t end,
    const std::function<void(std::int64_t, std::int64_t)>& chunk_fn,
    int threads = 0) {
  const std::int64_t count = end - begin;
  if (count <= 0) return;
  if (threads <= 0) threads = default_thread_count();
  threads = static_cast<int>(std::min<std::int64_t>(threads, count));
  if (threads == 1) {
    chunk_fn(begin, end);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const std::int64_t lo = begin + w * chunk;
    const std::int64_t hi = std::min(end, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(chunk_fn, lo, hi);
  }
  for (auto& th : pool) th.join();
}

}  // namespace glauber
