// Monte Carlo bookkeeping: every stochastic output of the lab is an
// MCEstimate (mean, standard error, path count, run metadata).

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "fklab/engine.hpp"
#include "fklab/util.hpp"

namespace fklab {

struct McMeta {
  double dt = 0;
  double horizon = 0;
  std::uint64_t seed = 0;
};

struct MCEstimate {
  double mean = 0;
  double std_error = 0;
  std::int64_t n_paths = 0;
  McMeta meta;
};

struct McParams {
  std::int64_t n_paths = 10000;
  double dt = 1e-3;
  double horizon = 1.0;
  std::uint64_t seed = 0;
};

inline MCEstimate summarize(std::span<const double> values, McMeta meta = {}) {
  if (values.size() < 2)
    throw std::invalid_argument("summarize: need n_paths >= 2");
  auto n = static_cast<double>(values.size());
  double mean = neumaier_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    double d = values[i] - mean;
    sq[i] = d * d;
  }
  double var = neumaier_sum(sq) / (n - 1.0);
  MCEstimate e;
  e.mean = mean;
  e.std_error = std::sqrt(var / n);
  e.n_paths = static_cast<std::int64_t>(values.size());
  e.meta = meta;
  return e;
}

// Runs n_paths through per-worker sink clones.  The factory returns a
// fresh sink per worker; sinks write per-path slots in shared output
// arrays (ranges are disjoint), so the result is independent of the
// worker count.
inline void run_paths_parallel(
    const ProcessSpec& spec, double dt, std::uint64_t n_steps,
    std::uint64_t seed, std::int64_t n_paths,
    const std::function<std::unique_ptr<engine::ISink>()>& sink_factory) {
  parallel_ranges(n_paths, [&](std::int64_t b, std::int64_t e) {
    auto sink = sink_factory();
    engine::run_paths_auto(spec, dt, n_steps, seed, b, e, *sink);
  });
}

inline std::uint64_t steps_for(double horizon, double dt) {
  double n = std::ceil(horizon / dt - 1e-9);
  if (n < 1) n = 1;
  return static_cast<std::uint64_t>(n);
}

}  // namespace fklab
