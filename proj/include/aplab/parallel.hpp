#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace aplab {

// Worker count used by parallel_for / parallel_chunks. 0 selects the
// implementation default (min(4, hardware)). Every parallel construct in this
// library is a pure fan-out over disjoint slots plus an order-independent
// max/argmax merge, so results are bit-identical for any thread count.
int default_threads();
void set_default_threads(int k);

namespace detail {
int resolve_threads(int work_items);
}

// Number of chunks parallel_chunks(n, ...) will use.
inline int plan_chunks(int n) { return detail::resolve_threads(n); }

template <class Fn>
void parallel_for(int n, Fn&& fn) {
  const int t = detail::resolve_threads(n);
  if (t <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(t));
  const int chunk = (n + t - 1) / t;
  for (int w = 0; w < t; ++w) {
    const int b = w * chunk;
    const int e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] {
      for (int i = b; i < e; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Contiguous chunks with a chunk index, for per-thread accumulators that are
// merged afterwards in fixed chunk order. Spawns exactly `chunks` workers
// covering [0, n); pass the value from plan_chunks so accumulator sizing and
// the fan-out cannot drift apart.
template <class Fn>
void parallel_chunks(int n, int chunks, Fn&& fn) {
  if (chunks <= 1) {
    fn(0, 0, n);
    return;
  }
  const int chunk = (n + chunks - 1) / chunks;
  std::vector<std::thread> pool;
  for (int w = 0; w < chunks; ++w) {
    const int b = std::min(n, w * chunk);
    const int e = std::min(n, b + chunk);
    pool.emplace_back([&fn, w, b, e] { fn(w, b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace aplab
