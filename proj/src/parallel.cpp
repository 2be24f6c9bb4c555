#include "aplab/parallel.hpp"

#include <atomic>

namespace aplab {

namespace {
std::atomic<int> g_threads{0};
}

int default_threads() { return g_threads.load(); }

void set_default_threads(int k) { g_threads.store(k < 0 ? 0 : k); }

namespace detail {

int resolve_threads(int work_items) {
  int k = g_threads.load();
  if (k == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    k = static_cast<int>(hw == 0 ? 1 : std::min(hw, 4u));
  }
  return std::max(1, std::min(k, work_items));
}

}  // namespace detail

}  // namespace aplab
