#include "fklab/nonlinear.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fklab/sinks.hpp"

namespace fklab {

namespace {

void require_interval_problem(const ProblemSpec& p) {
  p.validate();
  if (p.domain.kind() != DomainKind::Interval)
    throw std::invalid_argument("solver: 1D interval grids only");
}

BoundaryExtension extension_for(const ProblemSpec& p) {
  return p.process.killed() ? BoundaryExtension::ZeroOutside
                            : BoundaryExtension::ClampToEnds;
}

// One expectation sweep over the grid nodes: runs the configured sink
// per node and returns (means, standard errors).  Killed boundary
// nodes are pinned to `boundary_value` without simulation.
struct SweepResult {
  std::vector<double> mean;
  std::vector<double> se;
};

SweepResult grid_sweep(const ProblemSpec& problem,
                       const std::vector<double>& nodes,
                       const sinks::DriverIntegralSink::Config& cfg,
                       std::int64_t n_paths, std::uint64_t seed,
                       std::uint64_t job_tag, double boundary_value) {
  SweepResult r;
  r.mean.assign(nodes.size(), 0.0);
  r.se.assign(nodes.size(), 0.0);
  std::uint64_t n_steps = steps_for(cfg.horizon, cfg.dt);
  bool killed = problem.process.killed();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    bool boundary = nodes[i] == problem.domain.lo(0) ||
                    nodes[i] == problem.domain.hi(0);
    if (killed && boundary) {
      r.mean[i] = boundary_value;
      continue;
    }
    std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
    sinks::StartPlan plan;
    plan.x0 = make_point({nodes[i]});
    plan.domain = problem.domain;
    plan.stream_base = rng::mix64(job_tag, i);
    run_paths_parallel(problem.process, cfg.dt, n_steps, seed, n_paths, [&] {
      return std::make_unique<sinks::DriverIntegralSink>(plan, cfg, &vals);
    });
    auto est = summarize(vals, {cfg.dt, cfg.horizon, seed});
    r.mean[i] = est.mean;
    r.se[i] = est.std_error;
  }
  return r;
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

}  // namespace

ParabolicSolution solve_parabolic(const ProblemSpec& problem, double T,
                                  int n_time, const SolverParams& params) {
  require_interval_problem(problem);
  if (!(T > 0) || n_time < 1)
    throw std::invalid_argument("solve_parabolic: need T > 0, n_time >= 1");

  const Coefficients& c = problem.coefficients;
  MonotoneNormalization norm = normalize_monotone(c);
  double slice_dt = T / n_time;
  auto ext = extension_for(problem);
  std::vector<double> nodes =
      linspace(problem.domain.lo(0), problem.domain.hi(0), params.n_space);

  // slice 0: the initial datum (in the hat variable it is unchanged)
  std::vector<double> times{0.0};
  std::vector<GridFunction> slices;
  std::vector<GridFunction> ses;
  std::vector<std::vector<double>> sweep_log;
  {
    std::vector<double> v0(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
      v0[i] = c.phi_at(make_point({nodes[i]}));
    slices.emplace_back(nodes, v0, ext);
    ses.emplace_back(nodes, std::vector<double>(nodes.size(), 0.0), ext);
  }

  for (int k = 0; k < n_time; ++k) {
    double t_mid = (static_cast<double>(k) + 0.5) * slice_dt;
    const GridFunction& prev = slices.back();

    // drivers in the hat variable, frozen at the slice midpoint
    sinks::DriverIntegralSink::Config cfg;
    if (c.f || !norm.identity)
      cfg.f = [&c, &norm, t_mid](const Point& x, double y) {
        return norm.driver(c, t_mid, x, y);
      };
    if (c.g)
      cfg.g = [&c, &norm, t_mid](const Point& x, double y) {
        if (norm.identity) return c.g(x, y);
        double s = norm.inverse_scale(t_mid);
        return c.g(x, s * y) / s;
      };
    cfg.measure = &problem.measure;
    cfg.terminal = [&prev](const Point& x) { return prev(x[0]); };
    cfg.lambda = c.lambda;
    cfg.dt = params.dt;
    cfg.horizon = slice_dt;

    GridFunction candidate(nodes, std::vector<double>(nodes.size(), 0.0), ext);
    SweepResult last;
    std::vector<double> changes;
    for (int sweep = 0; sweep < std::max(1, params.picard_sweeps); ++sweep) {
      if (sweep == 0)
        cfg.read = [&prev](const Point& x) { return prev(x[0]); };
      else
        cfg.read = [&candidate](const Point& x) { return candidate(x[0]); };
      auto res = grid_sweep(problem, nodes, cfg, params.n_paths, params.seed,
                            rng::mix64(params.seed, 0x706172u,
                                       static_cast<std::uint64_t>(k)),
                            0.0);
      if (sweep > 0) changes.push_back(sup_abs_diff(res.mean, last.mean));
      last = res;
      candidate.values() = res.mean;
    }
    sweep_log.push_back(changes);
    slices.emplace_back(nodes, last.mean, ext);
    ses.emplace_back(nodes, last.se, ext);
    times.push_back(static_cast<double>(k + 1) * slice_dt);
  }

  // back to the original variable
  if (!norm.identity) {
    for (std::size_t k = 0; k < slices.size(); ++k) {
      double s = norm.inverse_scale(times[k]);
      for (auto& v : slices[k].values()) v *= s;
      for (auto& v : ses[k].values()) v *= s;
    }
  }

  ParabolicSolution sol;
  sol.u = TimeSpaceGridFunction(times, slices);
  sol.std_errors = std::move(ses);
  sol.sweep_changes = std::move(sweep_log);
  sol.params = params;
  sol.slice_dt = slice_dt;
  return sol;
}

EllipticSolution solve_elliptic(const ProblemSpec& problem, double horizon_n,
                                const SolverParams& params,
                                bool with_terminal_phi) {
  require_interval_problem(problem);
  const Coefficients& c = problem.coefficients;
  if (c.alpha_mono > 0)
    throw std::invalid_argument(
        "solve_elliptic: dissipative drivers required (alpha_mono <= 0)");
  if (!problem.process.killed() && c.lambda == 0.0) {
    bool sourced = !problem.measure.is_zero() || c.f || with_terminal_phi;
    if (sourced)
      throw std::invalid_argument(
          "solve_elliptic: recurrent configuration without killing "
          "diverges (divergence guard)");
  }

  auto ext = extension_for(problem);
  std::vector<double> nodes =
      linspace(problem.domain.lo(0), problem.domain.hi(0), params.n_space);

  GridFunction v(nodes, std::vector<double>(nodes.size(), 0.0), ext);
  SweepResult last;
  last.mean.assign(nodes.size(), 0.0);
  last.se.assign(nodes.size(), 0.0);

  sinks::DriverIntegralSink::Config cfg;
  if (c.f)
    cfg.f = [&c](const Point& x, double y) { return c.f(x, y); };
  if (c.g)
    cfg.g = [&c](const Point& x, double y) { return c.g(x, y); };
  cfg.measure = &problem.measure;
  if (with_terminal_phi)
    cfg.terminal = [&c](const Point& x) { return c.phi_at(x); };
  cfg.lambda = c.lambda;
  cfg.dt = params.dt;
  cfg.horizon = horizon_n;

  std::vector<double> trace;
  bool converged = false;
  int j = 0;
  for (; j < params.j_max; ++j) {
    cfg.read = [&v](const Point& x) { return v(x[0]); };
    auto res = grid_sweep(problem, nodes, cfg, params.n_paths, params.seed,
                          rng::mix64(params.seed, 0x656c6cu), 0.0);
    double change = sup_abs_diff(res.mean, last.mean);
    trace.push_back(change);
    last = res;
    v.values() = res.mean;
    double tol = std::max(params.tol_floor, 3.0 * median_of(res.se));
    if (j > 0 && change <= tol) {
      converged = true;
      ++j;
      break;
    }
  }
  if (!converged) {
    std::ostringstream os;
    os << "solve_elliptic: no convergence in " << params.j_max
       << " sweeps; trace:";
    for (double t : trace) os << ' ' << t;
    throw std::runtime_error(os.str());
  }

  EllipticSolution sol;
  sol.v = std::move(v);
  sol.std_error = GridFunction(nodes, last.se, ext);
  sol.trace = std::move(trace);
  sol.sweeps_used = j;
  sol.converged = converged;
  sol.horizon = horizon_n;
  return sol;
}

TruncationGap truncation_gap(const ProblemSpec& problem, double n, double m,
                             const SolverParams& params) {
  require_interval_problem(problem);
  if (!(n < m)) throw std::invalid_argument("truncation_gap: need n < m");
  const Coefficients& c = problem.coefficients;

  auto vn = solve_elliptic(problem, n, params, /*with_terminal_phi=*/true);
  auto vm = solve_elliptic(problem, m, params, /*with_terminal_phi=*/true);

  std::vector<double> nodes =
      linspace(problem.domain.lo(0), problem.domain.hi(0), params.n_space);
  std::uint64_t steps_n = steps_for(n, params.dt);
  std::uint64_t steps_m = steps_for(m, params.dt);

  // tail estimate: window integral of |f(.,0)|, |g(.,0)| plus the
  // surviving-datum terms at n and m
  sinks::DriverIntegralSink::Config cfg;
  if (c.f)
    cfg.f = [&c](const Point& x, double) { return std::abs(c.f(x, 0.0)); };
  if (c.g)
    cfg.g = [&c](const Point& x, double) { return std::abs(c.g(x, 0.0)); };
  cfg.measure = &problem.measure;
  cfg.lambda = c.lambda;
  cfg.dt = params.dt;
  cfg.horizon = m;
  cfg.window_begin = steps_n;
  cfg.window_end = steps_m;

  TruncationGap gap;
  gap.grid = nodes;
  gap.lhs.assign(nodes.size(), 0.0);
  gap.rhs.assign(nodes.size(), 0.0);
  gap.slack.assign(nodes.size(), 0.0);

  SpaceFn abs_phi = [&c](const Point& x) { return std::abs(c.phi_at(x)); };
  bool killed = problem.process.killed();

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    gap.lhs[i] = std::abs(vm.v.values()[i] - vn.v.values()[i]);
    double se = vm.std_error.values()[i] + vn.std_error.values()[i];

    bool boundary = nodes[i] == problem.domain.lo(0) ||
                    nodes[i] == problem.domain.hi(0);
    if (killed && boundary) {
      gap.slack[i] = 3.0 * se;
      continue;
    }
    std::vector<double> vals(static_cast<std::size_t>(params.n_paths), 0.0);
    sinks::StartPlan plan;
    plan.x0 = make_point({nodes[i]});
    plan.domain = problem.domain;
    plan.stream_base = rng::mix64(params.seed, 0x7472756Eu, i);
    std::uint64_t job_seed = rng::mix64(params.seed, 0x := 0);
    run_paths_parallel(problem.process, params.dt, steps_m, job_seed,
                       params.n_paths, [&] {
                         return std::make_unique<sinks::DriverIntegralSink>(
                             plan, cfg, &vals);
                       });
    if (c.phi) {
      run_paths_parallel(problem.process, params.dt, steps_m, job_seed,
                         params.n_paths, [&] {
                           return std::make_unique<sinks::AliveMarksAddSink>(
                               plan, abs_phi,
                               std::vector<std::uint64_t>{steps_n, steps_m},
                               &vals);
                         });
    }
    auto est = summarize(vals, {params.dt, m, job_seed});
    gap.rhs[i] = est.mean;
    gap.slack[i] = 3.0 * (se + est.std_error);
  }
  return gap;
}

AprioriReport apriori_check(const ProblemSpec& problem,
                            const ParabolicSolution& solved, double T,
                            const SolverParams& params) {
  require_interval_problem(problem);
  const Coefficients& c = problem.coefficients;
  const TimeSpaceGridFunction& u = solved.u;

  std::vector<double> nodes =
      linspace(problem.domain.lo(0), problem.domain.hi(0), params.n_space);
  std::uint64_t n_steps = steps_for(T, params.dt);

  // lhs: drivers evaluated along Y_t = u(T - t, X_t)
  sinks::DriverIntegralSink::Config lhs_cfg;
  if (c.f)
    lhs_cfg.f = [&c](const Point& x, double y) { return std::abs(c.f(x, y)); };
  if (c.g)
    lhs_cfg.g = [&c](const Point& x, double y) { return std::abs(c.g(x, y)); };
  lhs_cfg.measure = &problem.measure;
  lhs_cfg.read_time = [&u, T](double t, const Point& x) {
    return u(T - t, x[0]);
  };
  lhs_cfg.lambda = c.lambda;
  lhs_cfg.dt = params.dt;
  lhs_cfg.horizon = T;

  // rhs: |phi(X_{T^zeta})| + 2 int |f(.,0)| dt + 3 int |g(.,0)| dA
  sinks::DriverIntegralSink::Config rhs_cfg;
  if (c.f)
    rhs_cfg.f = [&c](const Point& x, double) {
      return 2.0 * std::abs(c.f(x, 0.0));
    };
  if (c.g)
    rhs_cfg.g = [&c](const Point& x, double) {
      return 3.0 * std::abs(c.g(x, 0.0));
    };
  rhs_cfg.measure = &problem.measure;
  if (c.phi)
    rhs_cfg.terminal = [&c](const Point& x) { return std::abs(c.phi_at(x)); };
  rhs_cfg.lambda = c.lambda;
  rhs_cfg.dt = params.dt;
  rhs_cfg.horizon = T;

  AprioriReport rep;
  rep.grid = nodes;
  auto lhs = grid_sweep(problem, nodes, lhs_cfg, params.n_paths, params.seed,
                        rng::mix64(params.seed, 0x61707269u), 0.0);
  auto rhs = grid_sweep(problem, nodes, rhs_cfg, params.n_paths, params.seed,
                        rng::mix64(params.seed, 0x61707269u), 0.0);
  rep.lhs = lhs.mean;
  rep.rhs = rhs.mean;
  rep.slack.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    rep.slack[i] = 3.0 * (lhs.se[i] + rhs.se[i]);
  return rep;
}

}  // namespace fklab
