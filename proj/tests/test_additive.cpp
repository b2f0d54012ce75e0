#include "doctest.h"

#include <cmath>

#include "fklab/additive.hpp"
#include "fklab/process_ops.hpp"
#include "fklab/simulate.hpp"

using namespace fklab;

TEST_CASE("zero measure gives zero functional") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::killed_brownian(dom);
  auto p = simulate(spec, make_point({0.5}), 1.0, 1e-3, {1, 0});
  auto tr = evaluate_af(p, SmoothMeasure::zero(), dom);
  for (double v : tr.values) CHECK(v == 0.0);
}

TEST_CASE("unit density: A_t = t ^ lifetime exactly") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::killed_brownian(dom);
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  for (std::uint64_t s = 0; s < 16; ++s) {
    auto p = simulate(spec, make_point({0.4}), 3.0, 1e-3, {5, s});
    auto tr = evaluate_af(p, meas, dom);
    for (std::size_t k = 0; k < p.times.size(); ++k)
      CHECK(tr.values[k] == doctest::Approx(p.times[k]).epsilon(1e-12));
    if (!p.alive_at_end())
      CHECK(tr.final_value() == doctest::Approx(p.lifetime).epsilon(1e-12));
  }
}

TEST_CASE("A is nondecreasing and flat after the lifetime") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::killed_brownian(dom);
  auto meas = SmoothMeasure::mollified_point(0.5, 1.0, 0.1);
  for (std::uint64_t s = 0; s < 16; ++s) {
    auto p = simulate(spec, make_point({0.5}), 3.0, 1e-3, {6, s});
    auto tr = evaluate_af(p, meas, dom);
    for (std::size_t k = 1; k < tr.values.size(); ++k)
      CHECK(tr.values[k] >= tr.values[k - 1]);
  }
}

TEST_CASE("pathwise linearity of the additive functional") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::killed_brownian(dom);
  auto m1 = SmoothMeasure::lebesgue_constant(0.7);
  auto m2 = SmoothMeasure::mollified_point(0.5, 2.0, 0.1);
  auto m12 = SmoothMeasure::lebesgue_density([&](const Point& p) {
    return m1.density(p) + m2.density(p);
  });
  auto p = simulate(spec, make_point({0.45}), 3.0, 1e-3, {9, 2});
  auto t1 = evaluate_af(p, m1, dom);
  auto t2 = evaluate_af(p, m2, dom);
  auto t12 = evaluate_af(p, m12, dom);
  for (std::size_t k = 0; k < t12.values.size(); ++k)
    CHECK(t12.values[k] ==
          doctest::Approx(t1.values[k] + t2.values[k]).epsilon(1e-12));
}

TEST_CASE("surface measure of unit weight recovers the local time") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::reflected_brownian(dom);
  auto surf = SmoothMeasure::surface_constant(1.0);
  auto p = simulate(spec, make_point({0.1}), 1.0, 1e-3, {31, 1});
  auto tr = evaluate_af(p, surf, dom);
  for (std::size_t k = 0; k < p.times.size(); ++k)
    CHECK(tr.values[k] == doctest::Approx(p.local_time[k]).epsilon(1e-12));
}

TEST_CASE("surface measure on a killed path is rejected") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::killed_brownian(dom);
  auto p = simulate(spec, make_point({0.5}), 1.0, 1e-3, {1, 0});
  CHECK_THROWS(evaluate_af(p, SmoothMeasure::surface_constant(1.0), dom));
}

TEST_CASE("weighted integral reduces to the plain functional") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec = ProcessSpec::killed_brownian(dom);
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  auto p = simulate(spec, make_point({0.5}), 3.0, 1e-3, {12, 7});
  double direct = evaluate_af(p, meas, dom).final_value();
  double weighted = weighted_af_integral(
      p, meas, dom, [](const Point&, double) { return 1.0; }, nullptr);
  CHECK(weighted == doctest::Approx(direct).epsilon(1e-12));
  // linear integrand with constant field
  double c = 2.5;
  double neg = weighted_af_integral(
      p, meas, dom, [](const Point&, double y) { return -y; },
      [c](const Point&) { return c; });
  CHECK(neg == doctest::Approx(-c * direct).epsilon(1e-12));
}

TEST_CASE("revuz limit: reflected Lebesgue entries equal 1 at every alpha") {
  auto spec = ProcessSpec::reflected_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  auto rows = revuz_check(spec, meas, {10.0, 100.0}, 2000, 1e-3, 77);
  for (auto& r : rows) {
    CHECK(r.mu_mass == doctest::Approx(1.0));
    CHECK(std::abs(r.entry.mean - 1.0) < 3 * r.entry.std_error + 1e-3);
  }
}

TEST_CASE("revuz limit: killed entries match the spectral values") {
  // 1 - E_m e^{-alpha zeta} = 1 - (2/k) tanh(k/2), k = sqrt(2 alpha)
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  auto rows = revuz_check(spec, meas, {10.0, 100.0}, 20000, 5e-4, 78);
  CHECK(std::abs(rows[0].entry.mean - 0.5628879598389264) <
        3 * rows[0].entry.std_error + 5e-3);
  CHECK(std::abs(rows[1].entry.mean - 0.8585788477923085) <
        3 * rows[1].entry.std_error + 5e-3);
  // monotone approach of the limit
  CHECK(rows[1].entry.mean > rows[0].entry.mean);
}

TEST_CASE("revuz limit: interval surface measure approaches 2") {
  auto spec = ProcessSpec::reflected_brownian(DomainSpec::interval(0, 1));
  auto surf = SmoothMeasure::surface_constant(1.0);
  auto rows = revuz_check(spec, surf, {20.0, 80.0}, 10000, 5e-5, 79);
  CHECK(rows[0].mu_mass == doctest::Approx(2.0));
  for (auto& r : rows)
    CHECK(std::abs(r.entry.mean - 2.0) < 3 * r.entry.std_error + 0.08);
}

TEST_CASE("shift law: KS statistic under the critical value") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  double ks0 = shift_law_check(spec, meas, make_point({0.5}), 0.0, 0.5, 4000,
                               1e-3, 2030);
  CHECK(ks0 < ks_critical(0.01, 4000, 4000));
  double ks1 = shift_law_check(spec, meas, make_point({0.5}), 1.0, 0.5, 4000,
                               1e-3, 2031);
  CHECK(ks1 < ks_critical(0.01, 4000, 4000));
}

TEST_CASE("shift law: surface measure variant") {
  auto spec = ProcessSpec::reflected_brownian(DomainSpec::interval(0, 1));
  auto surf = SmoothMeasure::surface_constant(1.0);
  double ks = shift_law_check(spec, surf, make_point({0.5}), 2.0, 0.5, 4000,
                              1e-3, 2032);
  CHECK(ks < ks_critical(0.01, 4000, 4000));
}
