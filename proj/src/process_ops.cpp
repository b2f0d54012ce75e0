#include "fklab/process_ops.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "fklab/sinks.hpp"

namespace fklab {

ExitTimeResult estimate_mean_exit_time(const ProcessSpec& spec,
                                       const Point& x0, std::int64_t n_paths,
                                       double dt, double horizon,
                                       std::uint64_t seed) {
  spec.validate();
  if (!spec.killed())
    throw std::invalid_argument(
        "mean exit time: unsupported for the reflected (conservative) "
        "process");
  if (!spec.domain.contains(x0)) {
    if (spec.domain.boundary_distance(x0) >= 0.0) {
      ExitTimeResult r;
      std::vector<double> zeros(static_cast<std::size_t>(n_paths), 0.0);
      r.estimate = summarize(zeros, {dt, horizon, seed});
      return r;
    }
    throw std::domain_error("mean exit time: start outside the closure");
  }

  std::uint64_t n_steps = steps_for(horizon, dt);
  double eff_horizon = static_cast<double>(n_steps) * dt;
  std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
  std::atomic<std::int64_t> survivors{0};
  sinks::StartPlan plan;
  plan.x0 = x0;
  plan.domain = spec.domain;
  run_paths_parallel(spec, dt, n_steps, seed, n_paths, [&] {
    return std::make_unique<sinks::ExitTimeSink>(plan, eff_horizon, &vals,
                                                 &survivors);
  });

  ExitTimeResult r;
  r.estimate = summarize(vals, {dt, eff_horizon, seed});
  r.survivors = survivors.load();
  r.survivor_fraction =
      static_cast<double>(r.survivors) / static_cast<double>(n_paths);
  r.bias_warning = r.survivor_fraction >= 0.01;
  return r;
}

std::vector<double> sample_af_at(const ProcessSpec& spec,
                                 const SmoothMeasure& measure, const Point& x0,
                                 double clock, double t, std::int64_t n_paths,
                                 double dt, std::uint64_t seed) {
  spec.validate();
  check_measure_process(measure, spec);
  std::uint64_t n_steps = steps_for(t, dt);
  std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
  sinks::StartPlan plan;
  plan.x0 = x0;
  plan.domain = spec.domain;
  std::uint64_t clock_bits;
  std::memcpy(&clock_bits, &clock, sizeof clock_bits);
  std::uint64_t job_seed = rng::mix64(seed, 0x73686966ull, clock_bits);
  run_paths_parallel(spec, dt, n_steps, job_seed, n_paths, [&] {
    return std::make_unique<sinks::AfIntegralSink>(plan, &measure, nullptr,
                                                   0.0, dt, &vals, n_steps);
  });
  return vals;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na -
                             static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical(double level, std::int64_t n, std::int64_t m) {
  double c = std::sqrt(-0.5 * std::log(level / 2.0));
  return c * std::sqrt(static_cast<double>(n + m) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

double shift_law_check(const ProcessSpec& spec, const SmoothMeasure& measure,
                       const Point& x0, double s, double t,
                       std::int64_t n_paths, double dt, std::uint64_t seed) {
  // the two draws stay independent even when s == 0
  auto sample0 = sample_af_at(spec, measure, x0, 0.0, t, n_paths, dt,
                              rng::mix64(seed, 1));
  auto sample_s = sample_af_at(spec, measure, x0, s, t, n_paths, dt,
                               rng::mix64(seed, 2));
  return ks_two_sample(std::move(sample0), std::move(sample_s));
}

}  // namespace fklab
