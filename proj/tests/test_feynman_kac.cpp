#include "doctest.h"

#include <cmath>

#include "fklab/feynman_kac.hpp"

using namespace fklab;

namespace {
constexpr double kPi = 3.14159265358979323846;
const SpaceFn sin_pi = [](const Point& p) { return std::sin(kPi * p[0]); };
}  // namespace

TEST_CASE("spectral oracle: eigenfunction decays by a single mode") {
  for (double t : {0.1, 0.3}) {
    double v = spectral_semigroup_interval(0, 1, sin_pi, t, 0.5);
    CHECK(v == doctest::Approx(std::exp(-kPi * kPi * t / 2)).epsilon(1e-8));
  }
  // t = 0 is the identity
  double v0 = spectral_semigroup_interval(0, 1, sin_pi, 0.0, 0.3);
  CHECK(v0 == doctest::Approx(std::sin(0.3 * kPi)));
}

TEST_CASE("spectral oracle: potential of the unit density is x(1-x)") {
  SpaceFn one = [](const Point&) { return 1.0; };
  for (double x : {0.2, 0.5, 0.8}) {
    double v = spectral_potential_interval(0, 1, one, 0.0, x);
    CHECK(v == doctest::Approx(x * (1 - x)).epsilon(1e-6));
  }
}

TEST_CASE("spectral oracle: survival and window integral") {
  // closed-form cross-check of the window integral at x = 1/2
  double w = spectral_survival_window_interval(0, 1, 0.5, 2.0, 0.5);
  CHECK(w == doctest::Approx(0.02186737869893447).epsilon(1e-8));
  double s = spectral_survival_interval(0, 1, 1.2, 0.5);
  CHECK(s == doctest::Approx(0.003412882061298649).epsilon(1e-6));
  // Laplace transform of the exit time
  double lap = spectral_exit_laplace_interval(0, 1, 100.0, 0.5);
  CHECK(lap == doctest::Approx(1.0 / std::cosh(std::sqrt(200.0) / 2)));
}

TEST_CASE("semigroup estimate matches the eigen decay") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto est = semigroup_apply(spec, sin_pi, 0.2, make_point({0.5}), 20000,
                             1e-3, 91);
  double target = std::exp(-kPi * kPi * 0.1);
  CHECK(std::abs(est.mean - target) < 3 * est.std_error + 0.02 * target);
}

TEST_CASE("semigroup: zero function, t = 0, boundary starts") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  SpaceFn zero = [](const Point&) { return 0.0; };
  auto e0 = semigroup_apply(spec, zero, 0.3, make_point({0.5}), 100, 1e-3, 1);
  CHECK(e0.mean == 0.0);
  auto eid = semigroup_apply(spec, sin_pi, 0.0, make_point({0.3}), 100, 1e-3, 1);
  CHECK(eid.mean == doctest::Approx(std::sin(0.3 * kPi)));
  auto eb = semigroup_apply(spec, sin_pi, 0.2, make_point({0.0}), 100, 1e-3, 1);
  CHECK(eb.mean == 0.0);
}

TEST_CASE("killing weight factorises bitwise at equal seeds") {
  auto dom = DomainSpec::interval(0, 1);
  auto spec0 = ProcessSpec::killed_brownian(dom, 0.0);
  auto spec1 = ProcessSpec::killed_brownian(dom, 1.0);
  double t = 0.25;
  auto e0 = semigroup_apply(spec0, sin_pi, t, make_point({0.5}), 5000, 1e-3, 7);
  auto e1 = semigroup_apply(spec1, sin_pi, t, make_point({0.5}), 5000, 1e-3, 7);
  CHECK(e1.mean == std::exp(-t) * e0.mean);
  CHECK(e1.std_error == std::exp(-t) * e0.std_error);
}

TEST_CASE("monotone decay of P_t phi over a dyadic grid") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto ests = semigroup_apply_multi(spec, sin_pi, {0.1, 0.2, 0.4, 0.8},
                                    make_point({0.5}), 20000, 1e-3, 17);
  for (std::size_t i = 1; i < ests.size(); ++i)
    CHECK(ests[i].mean <=
          ests[i - 1].mean + 3 * (ests[i].std_error + ests[i - 1].std_error));
  // contraction and positivity
  for (auto& e : ests) {
    CHECK(e.mean >= -3 * e.std_error);
    CHECK(std::abs(e.mean) <= 1.0 + 3 * e.std_error);
  }
}

TEST_CASE("potential: unit density at alpha = 0 is the exit time") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  auto r = potential(spec, meas, nullptr, 0.0, make_point({0.3}), 20000, 1e-3,
                     2.0, 5);
  CHECK(std::abs(r.estimate.mean - 0.21) < 3 * r.estimate.std_error + 2e-3);
  CHECK(r.survivor_fraction < 0.01);
}

TEST_CASE("potential: mollified point mass approaches the tent function") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::mollified_point(0.5, 1.0, 0.05);
  // away from the kink the hat bias vanishes
  auto r = potential(spec, meas, nullptr, 0.0, make_point({0.3}), 20000, 2e-5,
                     2.0, 6);
  CHECK(std::abs(r.estimate.mean - 0.3) < 3 * r.estimate.std_error + 5e-3);
}

TEST_CASE("potential: large alpha domination bound") {
  // near the boundary 1 - E e^{-alpha zeta} leaves real margin under
  // the A-mass/alpha bound, clear of the trapezoid bias
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  auto r = potential(spec, meas, nullptr, 1000.0, make_point({0.02}), 2000,
                     1e-4, 0.05, 8);
  CHECK(r.estimate.mean <= 1e-3);
}

TEST_CASE("potential: divergence guard on the recurrent case") {
  auto spec = ProcessSpec::reflected_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  CHECK_THROWS(potential(spec, meas, nullptr, 0.0, make_point({0.5}), 100,
                         1e-3, 1.0, 1));
  CHECK_NOTHROW(potential(spec, meas, nullptr, 0.5, make_point({0.5}), 100,
                          1e-3, 1.0, 1));
}

TEST_CASE("resolvent equation residual") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto meas = SmoothMeasure::lebesgue_constant(1.0);
  McParams mc;
  mc.n_paths = 4000;
  mc.dt = 1e-3;
  mc.horizon = 2.0;
  mc.seed = 99;
  // lambda = 1: the nested term vanishes, residual is pure MC noise
  auto r1 = resolvent_equation_residual(spec, meas, 1.0, {0.25, 0.5, 0.75}, mc);
  CHECK(r1.max_residual <= r1.max_combined_se);
  // zero measure: identically zero
  auto r0 = resolvent_equation_residual(spec, SmoothMeasure::zero(), 2.0,
                                        {0.4, 0.6}, mc);
  CHECK(r0.max_residual == 0.0);
  // lambda = 2: the identity holds within the stated budget
  auto r2 = resolvent_equation_residual(spec, meas, 2.0, {0.25, 0.5, 0.75}, mc);
  CHECK(r2.max_residual <= r2.max_combined_se);
}
