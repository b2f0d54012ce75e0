// Linear building blocks: semigroup P_t phi, potentials R_alpha mu and
// their killed-rate variants, the resolvent-equation diagnostic, and
// closed-form spectral oracles for (1/2)Laplacian on an interval with
// Dirichlet boundary.

#pragma once

#include <optional>
#include <vector>

#include "fklab/grid.hpp"
#include "fklab/measures.hpp"
#include "fklab/mc.hpp"
#include "fklab/process.hpp"

namespace fklab {

// exp(-lambda*t) * E_x[phi(X_t); t < lifetime].  The killing weight is
// a deterministic factor applied after averaging, so estimates with
// different lambda but equal seeds are exact multiples of each other.
MCEstimate semigroup_apply(const ProcessSpec& spec, const SpaceFn& phi,
                           double t, const Point& x, std::int64_t n_paths,
                           double dt, std::uint64_t seed);

// One path batch, several times at once (shared trajectories):
// values[i] estimates exp(-lambda*t_i) * E_x[phi(X_{t_i}); t_i < zeta].
std::vector<MCEstimate> semigroup_apply_multi(const ProcessSpec& spec,
                                              const SpaceFn& phi,
                                              const std::vector<double>& ts,
                                              const Point& x,
                                              std::int64_t n_paths, double dt,
                                              std::uint64_t seed);

struct PotentialResult {
  MCEstimate estimate;
  double survivor_fraction = 0;  // fraction of paths alive at the horizon
};

// E_x int_0^{zeta ^ horizon} exp(-(alpha+lambda) t) w(X_t) dA^mu_t.
// alpha = 0 requires a transient (killed) configuration or lambda > 0;
// the reflected recurrent case with a nonzero measure diverges and is
// rejected.
PotentialResult potential(const ProcessSpec& spec, const SmoothMeasure& measure,
                          const SpaceFn& weight, double alpha, const Point& x,
                          std::int64_t n_paths, double dt, double horizon,
                          std::uint64_t seed);

// max over x_grid of |R_lambda nu - R_1 nu - (1-lambda) R_lambda(R_1 nu)|
// via nested Monte Carlo.  Budgets: outer paths n_paths, the inner
// R_1 nu grid is precomputed with n_paths paths per node.
struct ResolventResidual {
  double max_residual = 0;
  double max_combined_se = 0;   // 3-sigma budget at the arg-max point
  std::vector<double> residuals;
};

ResolventResidual resolvent_equation_residual(
    const ProcessSpec& spec, const SmoothMeasure& measure, double lambda,
    const std::vector<double>& x_grid, const McParams& mc);

// ---- spectral oracle (interval, killed Brownian, generator Lap/2) ----

// P_t phi at x via the Dirichlet eigenexpansion; series truncated when
// the analytic tail bound drops below 1e-10.
double spectral_semigroup_interval(double a, double b, const SpaceFn& phi,
                                   double t, double x);

// R_alpha(beta dm) at x (alpha >= 0).
double spectral_potential_interval(double a, double b, const SpaceFn& beta,
                                   double alpha, double x);

// P_x(zeta > t) and the window integral int_n^m P_s 1(x) ds.
double spectral_survival_interval(double a, double b, double t, double x);
double spectral_survival_window_interval(double a, double b, double n,
                                         double m, double x);

// E_x exp(-alpha * zeta), closed form.
double spectral_exit_laplace_interval(double a, double b, double alpha,
                                      double x);

}  // namespace fklab
