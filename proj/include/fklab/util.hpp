#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fklab {

// Compensated (Neumaier) sum; sequential and therefore deterministic.
inline double neumaier_sum(std::span<const double> xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return sum + comp;
}

inline std::vector<double> linspace(double a, double b, int n) {
  if (n < 2) throw std::invalid_argument("linspace: need n >= 2");
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    xs[static_cast<std::size_t>(i)] =
        a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  xs.back() = b;
  return xs;
}

int worker_count();
void set_worker_count(int n);

// Splits [0, n) into contiguous chunks and runs fn(begin, end) on up to
// worker_count() threads.  Chunk boundaries depend only on n and the
// worker cap, never on scheduling, and callers write to disjoint slots,
// so results are reproducible for any worker count.
void parallel_ranges(std::int64_t n,
                     const std::function<void(std::int64_t, std::int64_t)>& fn);

}  // namespace fklab
