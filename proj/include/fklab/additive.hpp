// Additive functionals A^mu along paths: evaluation on recorded
// trajectories and the Revuz-limit diagnostic
//   alpha * E_m int_0^inf exp(-alpha t) dA_t  ->  mu(E)  (alpha -> inf).

#pragma once

#include <functional>
#include <vector>

#include "fklab/measures.hpp"
#include "fklab/mc.hpp"
#include "fklab/process.hpp"

namespace fklab {

// Nondecreasing step function t -> A_t sampled on the path grid.
struct AfTrace {
  std::vector<double> times;   // path grid times (plus lifetime if killed)
  std::vector<double> values;  // A at those times
  double final_value() const { return values.empty() ? 0.0 : values.back(); }
};

// Trapezoid (density variants) / local-time Stieltjes (surface)
// accumulation; A is nondecreasing for nonnegative data, starts at 0
// and is flat after the lifetime.  On recorded paths the surface
// increments are attributed to the nearest face, which is exact for
// face-constant weights (the engine sinks see exact per-face
// increments instead).
AfTrace evaluate_af(const PathSample& path, const SmoothMeasure& measure,
                    const DomainSpec& domain);

// int_0^{lifetime ^ horizon} integrand(X_s, field(X_s)) dA_s with the
// same quadrature family.  `field` may be empty (reads 0).
double weighted_af_integral(const PathSample& path,
                            const SmoothMeasure& measure,
                            const DomainSpec& domain,
                            const std::function<double(const Point&, double)>&
                                integrand,
                            const std::function<double(const Point&)>& field);

struct RevuzRow {
  double alpha = 0;
  MCEstimate entry;   // alpha * E_m int exp(-alpha t) dA_t
  double mu_mass = 0; // mu(E) when known
};

// Starting points are sampled uniformly on the (bounded interval/box)
// domain; entries approach mu(E) as alpha grows.
std::vector<RevuzRow> revuz_check(const ProcessSpec& spec,
                                  const SmoothMeasure& measure,
                                  const std::vector<double>& alpha_list,
                                  std::int64_t n_paths, double dt,
                                  std::uint64_t seed);

// mu(E) for the variants where it is computable (1D density via
// quadrature, mollified mass, interval surface measure); falls back to
// the measure's mass hint.
double measure_total_mass(const SmoothMeasure& measure,
                          const DomainSpec& domain);

}  // namespace fklab
