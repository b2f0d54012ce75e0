#include "fklab/additive.hpp"

#include <cmath>
#include <stdexcept>

#include "fklab/sinks.hpp"

namespace fklab {

namespace {

double face_weighted_increment(const SmoothMeasure& measure,
                               const DomainSpec& dom, const Point& x,
                               double ell_inc,
                               const std::function<double(const Point&, double)>&
                                   integrand,
                               const std::function<double(const Point&)>& field) {
  // nearest face of an interval/box
  int best_axis = 0;
  bool best_hi = false;
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < dom.dim(); ++a) {
    auto k = static_cast<std::size_t>(a);
    if (x[k] - dom.lo(a) < best) {
      best = x[k] - dom.lo(a);
      best_axis = a;
      best_hi = false;
    }
    if (dom.hi(a) - x[k] < best) {
      best = dom.hi(a) - x[k];
      best_axis = a;
      best_hi = true;
    }
  }
  Point fp = x;
  fp[static_cast<std::size_t>(best_axis)] =
      best_hi ? dom.hi(best_axis) : dom.lo(best_axis);
  double w = measure.surface_weight(fp);
  if (integrand) w *= integrand(fp, field ? field(fp) : 0.0);
  return w * ell_inc;
}

AfTrace accumulate(const PathSample& path, const SmoothMeasure& measure,
                   const DomainSpec& dom,
                   const std::function<double(const Point&, double)>& integrand,
                   const std::function<double(const Point&)>& field) {
  if (measure.needs_local_time() && path.local_time.empty())
    throw std::invalid_argument(
        "additive functional: surface measure needs a reflected path with "
        "recorded local time");

  AfTrace tr;
  tr.times = path.times;
  tr.values.assign(path.times.size(), 0.0);
  if (path.times.empty()) return tr;

  auto value_at = [&](const Point& x) {
    double v = measure.density(x);
    if (integrand) v *= integrand(x, field ? field(x) : 0.0);
    return v;
  };

  if (measure.needs_local_time()) {
    double acc = 0;
    for (std::size_t k = 1; k < path.times.size(); ++k) {
      double inc = path.local_time[k] - path.local_time[k - 1];
      if (inc > 0)
        acc += face_weighted_increment(measure, dom, path.states[k], inc,
                                       integrand, field);
      tr.values[k] = acc;
    }
    return tr;
  }

  double acc = 0;
  double prev = value_at(path.states[0]);
  for (std::size_t k = 1; k < path.times.size(); ++k) {
    double dt = path.times[k] - path.times[k - 1];
    double cur = value_at(path.states[k]);
    acc += 0.5 * dt * (prev + cur);
    prev = cur;
    tr.values[k] = acc;
  }
  if (!path.alive_at_end()) {
    // half step up to the midpoint lifetime
    double dt_half = path.lifetime - path.times.back();
    if (dt_half > 0) {
      acc += dt_half * prev;
      tr.times.push_back(path.lifetime);
      tr.values.push_back(acc);
    }
  }
  return tr;
}

}  // namespace

AfTrace evaluate_af(const PathSample& path, const SmoothMeasure& measure,
                    const DomainSpec& domain) {
  return accumulate(path, measure, domain, nullptr, nullptr);
}

double weighted_af_integral(
    const PathSample& path, const SmoothMeasure& measure,
    const DomainSpec& domain,
    const std::function<double(const Point&, double)>& integrand,
    const std::function<double(const Point&)>& field) {
  return accumulate(path, measure, domain, integrand, field).final_value();
}

double measure_total_mass(const SmoothMeasure& measure,
                          const DomainSpec& domain) {
  switch (measure.kind()) {
    case MeasureKind::MollifiedPoint:
      return measure.point_mass();
    case MeasureKind::SurfaceMeasure: {
      if (domain.kind() != DomainKind::Interval) break;
      Point a{domain.lo(0), 0, 0}, b{domain.hi(0), 0, 0};
      return measure.surface_weight(a) + measure.surface_weight(b);
    }
    case MeasureKind::LebesgueDensity: {
      if (domain.kind() == DomainKind::Interval) {
        // composite Simpson
        const int n = 2048;
        double lo = domain.lo(0), hi = domain.hi(0);
        double h = (hi - lo) / n;
        double s = 0;
        for (int i = 0; i <= n; ++i) {
          Point p{lo + i * h, 0, 0};
          double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
          s += w * measure.density(p);
        }
        return s * h / 3.0;
      }
      break;
    }
  }
  if (measure.mass_hint()) return *measure.mass_hint();
  throw std::invalid_argument(
      "measure mass not computable for this variant; set total_mass_hint");
}

std::vector<RevuzRow> revuz_check(const ProcessSpec& spec,
                                  const SmoothMeasure& measure,
                                  const std::vector<double>& alpha_list,
                                  std::int64_t n_paths, double dt,
                                  std::uint64_t seed) {
  if (!spec.domain.bounded())
    throw std::invalid_argument("revuz_check: bounded domain required");
  if (spec.domain.kind() == DomainKind::Ball)
    throw std::invalid_argument(
        "revuz_check: uniform starts implemented for interval/box domains");
  check_measure_process(measure, spec);
  measure.check_nonnegative(spec.domain);

  std::vector<RevuzRow> rows;
  double mass = measure_total_mass(measure, spec.domain);
  for (std::size_t ai = 0; ai < alpha_list.size(); ++ai) {
    double alpha = alpha_list[ai];
    if (!(alpha > 0))
      throw std::invalid_argument("revuz_check: alpha must be > 0");
    double horizon = 20.0 / alpha;  // exp(-20) truncation tail
    std::uint64_t n_steps = steps_for(horizon, dt);
    std::vector<double> vals(static_cast<std::size_t>(n_paths), 0.0);
    sinks::StartPlan plan;
    plan.uniform_start = true;
    plan.domain = spec.domain;
    plan.seed = rng::mix64(seed, 0x7265767578ull, ai);
    plan.stream_base = 0;
    std::uint64_t job_seed = rng::mix64(seed, 0xA1Full, ai);
    run_paths_parallel(spec, dt, n_steps, job_seed, n_paths, [&] {
      return std::make_unique<sinks::AfIntegralSink>(plan, &measure, nullptr,
                                                     alpha, dt, &vals);
    });
    RevuzRow row;
    row.alpha = alpha;
    row.entry = summarize(vals, {dt, horizon, job_seed});
    // E_m = vol(D) * E_uniform: starts are drawn from normalised
    // Lebesgue measure, the Revuz limit uses the unnormalised one.
    double scale = alpha * spec.domain.volume();
    row.entry.mean *= scale;
    row.entry.std_error *= scale;
    row.mu_mass = mass;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fklab
