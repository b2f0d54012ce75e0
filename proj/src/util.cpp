#include "fklab/util.hpp"

#include <algorithm>
#include <atomic>

namespace fklab {

namespace {
std::atomic<int> g_workers{0};  // 0 = hardware concurrency
}

int worker_count() {
  int w = g_workers.load();
  if (w > 0) return w;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_worker_count(int n) { g_workers.store(n < 0 ? 0 : n); }

void parallel_ranges(
    std::int64_t n,
    const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  int w = std::min<std::int64_t>(worker_count(), n);
  if (w <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(w));
  std::int64_t chunk = (n + w - 1) / w;
  for (int i = 0; i < w; ++i) {
    std::int64_t b = static_cast<std::int64_t>(i) * chunk;
    std::int64_t e = std::min(n, b + chunk);
    if (b >= e) break;
    threads.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace fklab
