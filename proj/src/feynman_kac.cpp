#include "fklab/feynman_kac.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "fklab/sinks.hpp"

namespace fklab {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_start(const ProcessSpec& spec, const Point& x) {
  if (!spec.domain.contains(x) && spec.domain.boundary_distance(x) < 0)
    throw std::domain_error("start point outside the closure");
}

bool starts_dead(const ProcessSpec& spec, const Point& x) {
  return spec.killed() && !spec.domain.contains(x);
}

MCEstimate constant_estimate(double v, std::int64_t n, McMeta meta) {
  MCEstimate e;
  e.mean = v;
  e.std_error = 0;
  e.n_paths = n;
  e.meta = meta;
  return e;
}

}  // namespace

std::vector<MCEstimate> semigroup_apply_multi(const ProcessSpec& spec,
                                              const SpaceFn& phi,
                                              const std::vector<double>& ts,
                                              const Point& x,
                                              std::int64_t n_paths, double dt,
                                              std::uint64_t seed) {
  spec.validate();
  require_start(spec, x);
  if (ts.empty()) return {};
  for (double t : ts)
    if (t < 0) throw std::invalid_argument("semigroup: t >= 0 required");

  double t_max = *std::max_element(ts.begin(), ts.end());
  std::vector<MCEstimate> out(ts.size());

  if (starts_dead(spec, x)) {
    // lifetime 0: E[phi(X_t); t < zeta] vanishes for every t
    for (std::size_t i = 0; i < ts.size(); ++i)
      out[i] = constant_estimate(0.0, n_paths, {dt, 0, seed});
    return out;
  }
  if (t_max == 0) {
    Point p = x;
    for (std::size_t i = 0; i < ts.size(); ++i)
      out[i] = constant_estimate(phi(p), n_paths, {dt, 0, seed});
    return out;
  }

  // snap dt so that every requested time lands on the step grid
  std::uint64_t n_steps = steps_for(t_max, dt);
  double dt_eff = t_max / static_cast<double>(n_steps);
  std::vector<std::uint64_t> marks;
  std::vector<std::size_t> order(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return ts[i] < ts[j]; });
  for (std::size_t i : order) {
    auto m = static_cast<std::uint64_t>(std::llround(ts[i] / dt_eff));
    if (!marks.empty() && m <= marks.back())
      throw std::invalid_argument("semigroup: times must be distinct");
    marks.push_back(m);
  }

  std::vector<std::vector<double>> vals(
      marks.size(), std::vector<double>(static_cast<std::size_t>(n_paths), 0.0));
  sinks::StartPlan plan;
  plan.x0 = x;
  plan.domain = spec.domain;
  run_paths_parallel(spec, dt_eff, n_steps, seed, n_paths, [&] {
    return std::make_unique<sinks::MarkFunctionSink>(plan, phi, marks, &vals);
  });

  for (std::size_t k = 0; k < order.size(); ++k) {
    std::size_t i = order[k];
    MCEstimate e = summarize(vals[k], {dt_eff, ts[i], seed});
    double w = std::exp(-spec.killing_rate * ts[i]);
    e.mean *= w;
    e.std_error *= w;
    out[i] = e;
  }
  return out;
}

MCEstimate semigroup_apply(const ProcessSpec& spec, const SpaceFn& phi,
                           double t, const Point& x, std::int64_t n_paths,
                           double dt, std::uint64_t seed) {
  return semigroup_apply_multi(spec, phi, {t}, x, n_paths, dt, seed)[0];
}

PotentialResult potential(const ProcessSpec& spec, const SmoothMeasure& measure,
                          const SpaceFn& weight, double alpha, const Point& x,
                          std::int64_t n_paths, double dt, double horizon,
                          std::uint64_t seed) {
  spec.validate();
  require_start(spec, x);
  check_measure_process(measure, spec);
  if (alpha < 0) throw std::invalid_argument("potential: alpha >= 0");
  double rate = alpha + spec.killing_rate;
  if (rate == 0.0 && !spec.killed() && !measure.is_zero())
    throw std::invalid_argument(
        "potential: alpha = 0 with the recurrent reflected process diverges");

  PotentialResult r;
  if (starts_dead(spec, x)) {
    r.estimate = constant_estimate(0.0, n_paths, {dt, horizon, seed});
    return r;
  }

  std::uint64_t n_steps = steps_for(horizon, dt);
  std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
  std::atomic<std::int64_t> survivors{0};
  sinks::StartPlan plan;
  plan.x0 = x;
  plan.domain = spec.domain;
  run_paths_parallel(spec, dt, n_steps, seed, n_paths, [&] {
    return std::make_unique<sinks::AfIntegralSink>(plan, &measure, weight, rate,
                                                   dt, &vals, 0, &survivors);
  });
  r.estimate = summarize(vals, {dt, horizon, seed});
  r.survivor_fraction = static_cast<double>(survivors.load()) /
                        static_cast<double>(n_paths);
  return r;
}

ResolventResidual resolvent_equation_residual(
    const ProcessSpec& spec, const SmoothMeasure& measure, double lambda,
    const std::vector<double>& x_grid, const McParams& mc) {
  if (!(lambda > 0))
    throw std::invalid_argument("resolvent residual: lambda > 0 required");
  if (spec.domain.dim() != 1)
    throw std::invalid_argument("resolvent residual: 1D grids only");

  // inner stage: R_1 nu tabulated on the grid
  GridFunction r1(x_grid,
                  std::vector<double>(x_grid.size(), 0.0),
                  spec.killed() ? BoundaryExtension::ZeroOutside
                                : BoundaryExtension::ClampToEnds);
  std::vector<double> r1_se(x_grid.size(), 0.0);
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    Point p{x_grid[i], 0, 0};
    auto est = potential(spec, measure, nullptr, 1.0, p, mc.n_paths, mc.dt,
                         mc.horizon, rng::mix64(mc.seed, 0x11, i));
    r1.values()[i] = est.estimate.mean;
    r1_se[i] = est.estimate.std_error;
  }

  SpaceFn r1_read = [&r1](const Point& p) { return r1(p[0]); };
  SmoothMeasure lebesgue = SmoothMeasure::lebesgue_constant(1.0);

  ResolventResidual out;
  out.residuals.resize(x_grid.size());
  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    Point p{x_grid[i], 0, 0};
    auto r_lam = potential(spec, measure, nullptr, lambda, p, mc.n_paths,
                           mc.dt, mc.horizon, rng::mix64(mc.seed, 0x22, i));
    // R_lambda applied to the function R_1 nu, i.e. the measure
    // (R_1 nu) dm
    auto r_nested = potential(spec, lebesgue, r1_read, lambda, p, mc.n_paths,
                              mc.dt, mc.horizon, rng::mix64(mc.seed, 0x33, i));
    double resid = r_lam.estimate.mean - r1.values()[i] -
                   (1.0 - lambda) * r_nested.estimate.mean;
    out.residuals[i] = std::abs(resid);
    double se = r_lam.estimate.std_error + r1_se[i] +
                std::abs(1.0 - lambda) * (r_nested.estimate.std_error + r1_se[i]);
    if (out.residuals[i] >= out.max_residual) {
      out.max_residual = out.residuals[i];
      out.max_combined_se = 3.0 * se;
    }
  }
  return out;
}

// ---------- spectral oracles ----------

namespace {

// Dirichlet eigenpairs of (1/2) d^2/dx^2 on (a,b):
//   lambda_k = k^2 pi^2 / (2 L^2),  e_k(x) = sqrt(2/L) sin(k pi (x-a)/L).
struct IntervalBasis {
  double a, L;
  double lambda(int k) const {
    double kpiL = k * kPi / L;
    return 0.5 * kpiL * kpiL;
  }
  double e(int k, double x) const {
    return std::sqrt(2.0 / L) * std::sin(k * kPi * (x - a) / L);
  }
};

// <f, e_k> by composite Simpson on a fine grid.
double coeff(const IntervalBasis& basis, const SpaceFn& f, int k, int n = 4096) {
  double h = basis.L / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    double x = basis.a + i * h;
    double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    Point p{x, 0, 0};
    s += w * f(p) * basis.e(k, x);
  }
  return s * h / 3.0;
}

}  // namespace

double spectral_semigroup_interval(double a, double b, const SpaceFn& phi,
                                   double t, double x) {
  IntervalBasis basis{a, b - a};
  if (t == 0) {
    Point p{x, 0, 0};
    return phi(p);
  }
  // sup|phi| bound for the tail estimate
  double sup = 0;
  for (int i = 0; i <= 64; ++i) {
    Point p{a + (b - a) * i / 64.0, 0, 0};
    sup = std::max(sup, std::abs(phi(p)));
  }
  double sum = 0;
  double amp = std::sqrt(2.0 / basis.L);
  for (int k = 1; k <= 40000; ++k) {
    double ek = std::exp(-basis.lambda(k) * t);
    double tail = 2.0 * sup * basis.L * amp * amp * ek;  // crude |c_k|<=sup*L*amp
    sum += coeff(basis, phi, k) * ek * basis.e(k, x);
    if (tail < 1e-10 && k >= 8) break;
  }
  return sum;
}

double spectral_potential_interval(double a, double b, const SpaceFn& beta,
                                   double alpha, double x) {
  IntervalBasis basis{a, b - a};
  double sum = 0;
  for (int k = 1; k <= 40000; ++k) {
    double den = alpha + basis.lambda(k);
    double ck = coeff(basis, beta, k);
    sum += ck / den * basis.e(k, x);
    if (k >= 64 && std::abs(ck) / den < 1e-12) break;
  }
  return sum;
}

double spectral_survival_interval(double a, double b, double t, double x) {
  IntervalBasis basis{a, b - a};
  double L = basis.L;
  double sum = 0;
  for (int k = 1; k <= 40000; k += 2) {  // even modes have zero mass
    double ck = std::sqrt(2.0 * L) * 2.0 / (k * kPi);
    double term = ck * std::exp(-basis.lambda(k) * t) * basis.e(k, x);
    sum += term;
    if (std::abs(ck * std::exp(-basis.lambda(k) * t)) * std::sqrt(2.0 / L) <
            1e-12 &&
        k >= 9)
      break;
  }
  return sum;
}

double spectral_survival_window_interval(double a, double b, double n,
                                         double m, double x) {
  IntervalBasis basis{a, b - a};
  double L = basis.L;
  double sum = 0;
  for (int k = 1; k <= 40000; k += 2) {
    double ck = std::sqrt(2.0 * L) * 2.0 / (k * kPi);
    double lam = basis.lambda(k);
    double term =
        ck / lam * (std::exp(-lam * n) - std::exp(-lam * m)) * basis.e(k, x);
    sum += term;
    if (k >= 9 && std::abs(ck / lam * std::exp(-lam * n)) * std::sqrt(2.0 / L) <
                      1e-12)
      break;
  }
  return sum;
}

double spectral_exit_laplace_interval(double a, double b, double alpha,
                                      double x) {
  if (alpha == 0) return 1.0;
  double L = b - a;
  double k = std::sqrt(2.0 * alpha);
  double mid = 0.5 * (a + b);
  return std::cosh(k * (x - mid)) / std::cosh(k * L / 2.0);
}

}  // namespace fklab
