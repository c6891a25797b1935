#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace twistdex {

// Worker count resolution order: explicit argument if positive, then the
// TWISTDEX_THREADS environment variable, then 1. Results never depend on the
// count; only wall time does.
inline int resolveThreadCount(int requested = 0) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TWISTDEX_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < 1024) return static_cast<int>(v);
  }
  return 1;
}

// Runs fn(i) for i in [0, n). Each index writes only to its own slots, and
// any reduction happens after the join, so the outcome is identical for
// every thread count.
inline void parallelFor(int n, const std::function<void(int)>& fn, int threads = 0) {
  threads = std::min(resolveThreadCount(threads), std::max(n, 1));
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::atomic<int> cursor{0};
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        int i = cursor.fetch_add(1);
        if (i >= n) break;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace twistdex
