#include "doctest.h"

#include "fklab/additive.hpp"
#include "fklab/domain.hpp"
#include "fklab/measures.hpp"
#include "fklab/process.hpp"

using namespace fklab;

TEST_CASE("interval membership and boundary distance") {
  auto d = DomainSpec::interval(0, 1);
  CHECK(d.contains(make_point({0.5})));
  CHECK(!d.contains(make_point({0.0})));
  CHECK(!d.contains(make_point({-0.1})));
  CHECK(d.boundary_distance(make_point({0.25})) == doctest::Approx(0.25));
  CHECK(d.boundary_distance(make_point({0.0})) == 0.0);
  CHECK(d.boundary_distance(make_point({-0.1})) < 0.0);
  CHECK_THROWS(DomainSpec::interval(1, 1));
}

TEST_CASE("ball distance") {
  auto d = DomainSpec::ball({0, 0}, 1.0);
  CHECK(d.dim() == 2);
  CHECK(d.contains(make_point({0.5, 0.5})));
  CHECK(!d.contains(make_point({0.8, 0.8})));
  CHECK(d.boundary_distance(make_point({0.6, 0.8})) == doctest::Approx(0.0));
  CHECK(d.volume() == doctest::Approx(3.14159265358979));
}

TEST_CASE("process spec validation") {
  CHECK_THROWS(ProcessSpec::killed_stable(DomainSpec::interval(0, 1), 2.0));
  CHECK_THROWS(ProcessSpec::killed_stable(DomainSpec::interval(0, 1), 0.0));
  CHECK_THROWS(
      ProcessSpec::reflected_brownian(DomainSpec::ball({0, 0}, 1.0)));
  CHECK_THROWS(
      ProcessSpec::killed_brownian(DomainSpec::interval(0, 1), -1.0));
  CHECK_NOTHROW(ProcessSpec::killed_stable(DomainSpec::interval(-1, 1), 1.0));
}

TEST_CASE("measure checks") {
  auto dom = DomainSpec::interval(0, 1);
  auto neg = SmoothMeasure::lebesgue_density(
      [](const Point& p) { return p[0] - 0.5; });
  CHECK_THROWS(neg.check_nonnegative(dom));
  auto hat = SmoothMeasure::mollified_point(0.5, 1.0, 0.05);
  CHECK_NOTHROW(hat.check_support(dom));
  CHECK(hat.density(make_point({0.5})) == doctest::Approx(20.0));
  CHECK(hat.density(make_point({0.56})) == 0.0);
  auto edge = SmoothMeasure::mollified_point(0.01, 1.0, 0.05);
  CHECK_THROWS(edge.check_support(dom));
  auto surf = SmoothMeasure::surface_constant(1.0);
  auto killed = ProcessSpec::killed_brownian(dom);
  CHECK_THROWS(check_measure_process(surf, killed));
  CHECK(measure_total_mass(surf, dom) == doctest::Approx(2.0));
  CHECK(measure_total_mass(SmoothMeasure::lebesgue_constant(2.5), dom) ==
        doctest::Approx(2.5));
}
