#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace exokin {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Run fn(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. Callers must reduce per-chunk results order-independently so
/// the outcome does not depend on the worker count.
template <class Fn>
void parallel_chunks(long n, int threads, Fn&& fn) {
  threads = static_cast<int>(std::max<long>(1, std::min<long>(threads, n)));
  if (threads <= 1 || n <= 1) {
    if (n > 0) fn(0L, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  const long chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const long b = t * chunk;
    const long e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace exokin
