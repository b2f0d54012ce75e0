// Probabilistic solvers for the semilinear problems
//   parabolic: du/dt - Lu + lambda u = f(x,u) + g(x,u).mu,  u(0) = phi
//   elliptic:  -Lv + lambda v = f(x,v) + g(x,v).mu
// on 1D interval grids.  The parabolic scheme is backward dynamic
// programming in slices of length T/n_time, explicit in the
// nonlinearity with a short inner Picard sweep; the elliptic solver is
// an outer Picard iteration on the horizon-truncated representation.
// Paths are reused across sweeps (common random numbers), so a sweep
// whose drivers ignore y reproduces the previous one bit for bit.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fklab/coefficients.hpp"
#include "fklab/grid.hpp"
#include "fklab/mc.hpp"

namespace fklab {

struct SolverParams {
  int n_space = 21;            // grid nodes including both ends
  std::int64_t n_paths = 10000;  // per node per slice/sweep
  double dt = 1e-3;            // path sub-step
  int picard_sweeps = 2;       // parabolic inner sweeps
  int j_max = 50;              // elliptic outer sweeps
  double tol_floor = 1e-3;     // elliptic stop: max(tol_floor, 3*median SE)
  std::uint64_t seed = 0;
};

struct ParabolicSolution {
  TimeSpaceGridFunction u;                  // slice times 0..T
  std::vector<GridFunction> std_errors;     // per slice
  std::vector<std::vector<double>> sweep_changes;  // per slice, per sweep
  SolverParams params;
  double slice_dt = 0;

  const GridFunction& final_slice() const { return u.slice(u.n_slices() - 1); }
};

struct EllipticSolution {
  GridFunction v;
  GridFunction std_error;
  std::vector<double> trace;  // sup-change per Picard sweep
  int sweeps_used = 0;
  bool converged = false;
  double horizon = 0;
  double survivor_fraction = 0;
};

ParabolicSolution solve_parabolic(const ProblemSpec& problem, double T,
                                  int n_time, const SolverParams& params);

// horizon_n truncates the representation; with with_terminal_phi the
// datum 1{zeta > horizon} phi(X_horizon) is added (the finite-horizon
// approximants of the elliptic problem).
EllipticSolution solve_elliptic(const ProblemSpec& problem, double horizon_n,
                                const SolverParams& params,
                                bool with_terminal_phi = false);

struct TruncationGap {
  std::vector<double> grid;
  std::vector<double> lhs;      // |v_m - v_n| per node
  std::vector<double> rhs;      // tail estimate per node
  std::vector<double> slack;    // 3 * combined SE per node
  bool all_within() const {
    for (std::size_t i = 0; i < lhs.size(); ++i)
      if (lhs[i] > rhs[i] + slack[i]) return false;
    return true;
  }
};

TruncationGap truncation_gap(const ProblemSpec& problem, double n, double m,
                             const SolverParams& params);

struct AprioriReport {
  std::vector<double> grid;
  std::vector<double> lhs;    // E[int |f_u| dt + int |g_u| dA]
  std::vector<double> rhs;    // E[|phi(X_{T^zeta})| + 2 int|f(.,0)| + 3 int|g(.,0)|]
  std::vector<double> slack;  // 3 * combined SE
  bool all_within() const {
    for (std::size_t i = 0; i < lhs.size(); ++i)
      if (lhs[i] > rhs[i] + slack[i]) return false;
    return true;
  }
};

AprioriReport apriori_check(const ProblemSpec& problem,
                            const ParabolicSolution& solved, double T,
                            const SolverParams& params);

}  // namespace fklab
