// Path-level estimators on the raw processes.

#pragma once

#include <vector>

#include "fklab/measures.hpp"
#include "fklab/mc.hpp"
#include "fklab/process.hpp"

namespace fklab {

struct ExitTimeResult {
  MCEstimate estimate;
  std::int64_t survivors = 0;     // paths that hit the horizon
  double survivor_fraction = 0;
  bool bias_warning = false;      // survivor fraction >= 1%
};

// Mean lifetime E_x[zeta] of a killed variant; survivors contribute the
// horizon value and trip the bias warning.
ExitTimeResult estimate_mean_exit_time(const ProcessSpec& spec,
                                       const Point& x0, std::int64_t n_paths,
                                       double dt, double horizon,
                                       std::uint64_t seed);

// Two-sample Kolmogorov-Smirnov statistic between the laws of A^mu_t
// sampled with start clock 0 and start clock s.  The simulation is
// time-homogeneous, so both samples follow one law and the statistic
// exercises the pipeline, not the physics.
double shift_law_check(const ProcessSpec& spec, const SmoothMeasure& measure,
                       const Point& x0, double s, double t,
                       std::int64_t n_paths, double dt, std::uint64_t seed);

// Samples of A^mu_t from start clock `clock` (clock only keys the
// sub-seed; the law is clock-invariant).
std::vector<double> sample_af_at(const ProcessSpec& spec,
                                 const SmoothMeasure& measure, const Point& x0,
                                 double clock, double t, std::int64_t n_paths,
                                 double dt, std::uint64_t seed);

double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic two-sample KS critical value at significance `level`.
double ks_critical(double level, std::int64_t n, std::int64_t m);

}  // namespace fklab
