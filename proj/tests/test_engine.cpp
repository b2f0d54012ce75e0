#include "doctest.h"

#include <cmath>

#include "fklab/engine.hpp"
#include "fklab/process_ops.hpp"
#include "fklab/simulate.hpp"

using namespace fklab;

namespace {

PathSample sim_interval(double x0, double horizon, double dt,
                        std::uint64_t seed, std::uint64_t stream) {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  return simulate(spec, make_point({x0}), horizon, dt, {seed, stream});
}

}  // namespace

TEST_CASE("simulate is deterministic in (seed, stream, dt)") {
  auto p1 = sim_interval(0.5, 2.0, 1e-3, 7, 3);
  auto p2 = sim_interval(0.5, 2.0, 1e-3, 7, 3);
  REQUIRE(p1.times.size() == p2.times.size());
  for (std::size_t k = 0; k < p1.times.size(); ++k) {
    CHECK(p1.times[k] == p2.times[k]);
    CHECK(p1.states[k][0] == p2.states[k][0]);
  }
  CHECK(p1.lifetime == p2.lifetime);

  auto p3 = sim_interval(0.5, 2.0, 1e-3, 7, 4);
  bool differs = p3.lifetime != p1.lifetime ||
                 p3.states.size() != p1.states.size();
  if (!differs && p3.states.size() > 2) differs = p3.states[2][0] != p1.states[2][0];
  CHECK(differs);
}

TEST_CASE("start on the boundary of a killed domain gives lifetime 0") {
  auto p = sim_interval(0.0, 1.0, 1e-3, 1, 0);
  CHECK(p.lifetime == 0.0);
  CHECK(p.states.size() == 1);
  CHECK(p.times.size() == 1);
}

TEST_CASE("start outside the closure is a domain error") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  CHECK_THROWS_AS(simulate(spec, make_point({1.5}), 1.0, 1e-3, {1, 0}),
                  std::domain_error);
}

TEST_CASE("killed paths record in-domain states only, lifetime on midpoint") {
  for (std::uint64_t s = 0; s < 32; ++s) {
    auto p = sim_interval(0.2, 4.0, 1e-3, 99, s);
    for (auto& st : p.states) {
      CHECK(st[0] > 0.0);
      CHECK(st[0] < 1.0);
    }
    if (!p.alive_at_end()) {
      CHECK(p.lifetime ==
            doctest::Approx(p.times.back() + 0.5e-3).epsilon(1e-12));
    }
  }
}

TEST_CASE("scalar and simd tiers produce bit-identical paths") {
  if (engine::active_kernel_tier() != engine::KernelTier::Avx2) {
    MESSAGE("no AVX2 on this host; equivalence degenerates");
    return;
  }
  for (auto kind : {ProcessKind::KilledBrownian, ProcessKind::ReflectedBrownian,
                    ProcessKind::KilledStable}) {
    ProcessSpec spec;
    spec.kind = kind;
    spec.domain = DomainSpec::interval(0, 1);
    if (kind == ProcessKind::KilledStable) spec.alpha_stable = 1.3;

    engine::force_kernel_tier(engine::KernelTier::Scalar);
    auto a = simulate(spec, make_point({0.37}), 1.0, 1e-3, {11, 5});
    engine::force_kernel_tier(engine::KernelTier::Avx2);
    auto b = simulate(spec, make_point({0.37}), 1.0, 1e-3, {11, 5});
    engine::reset_kernel_tier();

    REQUIRE(a.times.size() == b.times.size());
    CHECK(a.lifetime == b.lifetime);
    for (std::size_t k = 0; k < a.times.size(); ++k)
      CHECK(a.states[k][0] == b.states[k][0]);
    if (kind == ProcessKind::ReflectedBrownian)
      for (std::size_t k = 0; k < a.local_time.size(); ++k)
        CHECK(a.local_time[k] == b.local_time[k]);
  }
}

TEST_CASE("scalar and simd tiers give bit-identical batch estimates") {
  if (engine::active_kernel_tier() != engine::KernelTier::Avx2) return;
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  engine::force_kernel_tier(engine::KernelTier::Scalar);
  auto ea = estimate_mean_exit_time(spec, make_point({0.5}), 4000, 1e-3, 2.0, 5);
  engine::force_kernel_tier(engine::KernelTier::Avx2);
  auto eb = estimate_mean_exit_time(spec, make_point({0.5}), 4000, 1e-3, 2.0, 5);
  engine::reset_kernel_tier();
  CHECK(ea.estimate.mean == eb.estimate.mean);
  CHECK(ea.estimate.std_error == eb.estimate.std_error);
  CHECK(ea.survivors == eb.survivors);
}

TEST_CASE("worker count does not change results") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  set_worker_count(1);
  auto e1 = estimate_mean_exit_time(spec, make_point({0.5}), 4000, 1e-3, 2.0, 5);
  set_worker_count(4);
  auto e4 = estimate_mean_exit_time(spec, make_point({0.5}), 4000, 1e-3, 2.0, 5);
  set_worker_count(0);
  CHECK(e1.estimate.mean == e4.estimate.mean);
  CHECK(e1.estimate.std_error == e4.estimate.std_error);
}

TEST_CASE("mean exit time: interval oracle x(1-x)") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto r = estimate_mean_exit_time(spec, make_point({0.5}), 20000, 1e-3, 2.0,
                                   2024);
  CHECK(!r.bias_warning);
  CHECK(std::abs(r.estimate.mean - 0.25) <
        3 * r.estimate.std_error + 2e-3);

  auto r3 = estimate_mean_exit_time(spec, make_point({0.3}), 20000, 1e-3, 2.0,
                                    2025);
  CHECK(std::abs(r3.estimate.mean - 0.21) <
        3 * r3.estimate.std_error + 2e-3);
}

TEST_CASE("mean exit time: 2d ball oracle (r^2-|x|^2)/d") {
  auto spec = ProcessSpec::killed_brownian(DomainSpec::ball({0, 0}, 1.0));
  auto r = estimate_mean_exit_time(spec, make_point({0.0, 0.0}), 20000, 1e-3,
                                   6.0, 11);
  CHECK(std::abs(r.estimate.mean - 0.5) < 3 * r.estimate.std_error + 4e-3);
}

TEST_CASE("mean exit decreases under domain shrinking") {
  auto big = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  auto small = ProcessSpec::killed_brownian(DomainSpec::interval(0, 0.8));
  auto eb = estimate_mean_exit_time(big, make_point({0.3}), 20000, 1e-3, 2.0, 3);
  auto es =
      estimate_mean_exit_time(small, make_point({0.3}), 20000, 1e-3, 2.0, 4);
  CHECK(es.estimate.mean <
        eb.estimate.mean +
            3 * (es.estimate.std_error + eb.estimate.std_error));
}

TEST_CASE("reflected path: conservative, folded into the closure") {
  auto spec = ProcessSpec::reflected_brownian(DomainSpec::interval(0, 1));
  auto p = simulate(spec, make_point({0.05}), 1.0, 1e-3, {21, 0});
  CHECK(p.alive_at_end());
  REQUIRE(p.local_time.size() == p.times.size());
  double prev = 0;
  int contacts = 0;
  for (std::size_t k = 0; k < p.times.size(); ++k) {
    CHECK(p.states[k][0] >= 0.0);
    CHECK(p.states[k][0] <= 1.0);
    CHECK(p.local_time[k] >= prev);
    if (k > 0 && p.local_time[k] > prev) {
      ++contacts;
      // after a fold the offset from the touched face is a quarter of
      // the recorded increment (l doubles the fold displacement)
      double inc = p.local_time[k] - prev;
      double dist = std::min(p.states[k][0], 1.0 - p.states[k][0]);
      CHECK(dist == doctest::Approx(inc / 4).epsilon(1e-9));
    }
    prev = p.local_time[k];
  }
  CHECK(contacts > 0);  // started near the boundary
}

TEST_CASE("bridge kill decision matches the analytic survival probability") {
  auto dom = DomainSpec::interval(0, 1);
  double dt = 1e-2;
  simd::PackD<1> xo[kMaxDim], xn[kMaxDim];
  xo[0] = simd::PackD<1>(0.05);
  xn[0] = simd::PackD<1>(0.08);
  double e1 = std::exp(-2.0 * 0.05 * 0.08 / dt);
  double e2 = std::exp(-2.0 * 0.95 * 0.92 / dt);  // below the skip cut
  double p_surv = (1 - e1) * (e2 >= std::exp(-40.0) ? (1 - e2) : 1.0);
  for (double u : {0.01, p_surv - 1e-6, p_surv + 1e-6, 0.999}) {
    auto killed =
        engine::killed_step<1>(dom, xo, xn, simd::PackD<1>(u), dt);
    CHECK(static_cast<bool>(killed[0]) == (u > p_surv));
  }
  // endpoint outside kills regardless of the uniform
  xn[0] = simd::PackD<1>(-0.01);
  auto killed = engine::killed_step<1>(dom, xo, xn, simd::PackD<1>(1e-12), dt);
  CHECK(static_cast<bool>(killed[0]));
}

TEST_CASE("stable increments match the target characteristic function") {
  // one increment with dt = 1: ecf(xi) ~ exp(-|xi|^alpha)
  const std::int64_t n = 100000;
  for (double alpha : {1.0, 1.5}) {
    auto spec =
        ProcessSpec::killed_stable(DomainSpec::full_space(1), alpha);
    std::vector<double> xs(n);
    auto plan_seed = static_cast<std::uint64_t>(alpha * 1000);
    parallel_ranges(n, [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t i = b; i < e; ++i) {
        auto p = simulate(spec, make_point({0.0}), 1.0, 1.0,
                          {plan_seed, static_cast<std::uint64_t>(i)});
        xs[static_cast<std::size_t>(i)] = p.states.back()[0];
      }
    });
    for (double xi : {0.3, 0.7, 1.1, 1.7, 2.5}) {
      double c = 0;
      for (double x : xs) c += std::cos(xi * x);
      c /= static_cast<double>(n);
      double target = std::exp(-std::pow(std::abs(xi), alpha));
      CHECK(std::abs(c - target) < 4.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("isotropic stable in 2d: per-coordinate characteristic function") {
  const std::int64_t n = 60000;
  double alpha = 1.4;
  auto spec = ProcessSpec::killed_stable(DomainSpec::full_space(2), alpha);
  std::vector<double> xs(n);
  parallel_ranges(n, [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) {
      auto p = simulate(spec, make_point({0.0, 0.0}), 1.0, 1.0,
                        {77, static_cast<std::uint64_t>(i)});
      xs[static_cast<std::size_t>(i)] = p.states.back()[0];
    }
  });
  for (double xi : {0.5, 1.0, 2.0}) {
    double c = 0;
    for (double x : xs) c += std::cos(xi * x);
    c /= static_cast<double>(n);
    double target = std::exp(-std::pow(xi, alpha));
    CHECK(std::abs(c - target) < 5.0 / std::sqrt(static_cast<double>(n)));
  }
}

TEST_CASE("stable mean exit time vs closed form (alpha=1, interval)") {
  auto spec = ProcessSpec::killed_stable(DomainSpec::interval(-1, 1), 1.0);
  auto r = estimate_mean_exit_time(spec, make_point({0.0}), 20000, 1e-3, 14.0,
                                   314);
  // E_0 zeta = (1-x^2)^{1/2} = 1 at the centre
  CHECK(std::abs(r.estimate.mean - 1.0) < 3 * r.estimate.std_error + 0.02);
}

TEST_CASE("reflected process rejects exit-time estimation") {
  auto spec = ProcessSpec::reflected_brownian(DomainSpec::interval(0, 1));
  CHECK_THROWS(estimate_mean_exit_time(spec, make_point({0.5}), 100, 1e-3,
                                       1.0, 1));
}
