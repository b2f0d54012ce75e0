// Pack-generic path stepping kernels.
//
// The engine advances W paths per pack in lockstep and hands fixed-size
// step blocks to a sink.  Each path owns a Philox stream and consumes a
// fixed number of RNG blocks per step, indexed by its own step counter,
// so the sampled trajectory of path k is a pure function of
// (seed, stream_id, dt) regardless of lane width, batching or thread
// count.  Per-step draw budget (uniform pairs per step):
//   Brownian d<=2: d normals + 1 bridge/spare uniform -> ceil((d+1)/2)
//   Brownian d=3:  3 normals + 1 spare                -> 2
//   stable d=1:    angle + exponential                -> 1
//   stable d>=2:   subordinator pair + d normals      -> 1 + ceil(d/2)
//
// Sinks consume values, never raw randomness, and accumulate per path
// in time order; together with the per-lane libm rule in pack.hpp this
// makes scalar and AVX2 runs bit-identical, which the kernel
// equivalence tests assert.

#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "fklab/domain.hpp"
#include "fklab/normal_icdf.hpp"
#include "fklab/pack.hpp"
#include "fklab/philox.hpp"
#include "fklab/process.hpp"

namespace fklab::engine {

inline constexpr int kBlockSteps = 32;

// Step records for one block of up to kBlockSteps steps across `width`
// lanes.  Slot (s, lane) = s * width + lane.  Positions are post-step
// (post-reflection); `alive` is 1 while the path is still running after
// the step, so the first 0 row of a lane marks its kill step.  For
// reflected runs `ell` holds per-face local-time increments with faces
// ordered (lo0, hi0, lo1, hi1, ...).
struct StepBlock {
  int n_steps = 0;
  int width = 0;
  int dim = 1;
  double dt = 0;
  int n_faces = 0;
  std::vector<double> pos[kMaxDim];
  std::vector<std::uint8_t> alive;
  std::vector<double> ell;

  void resize(int width_, int dim_, bool reflected) {
    width = width_;
    dim = dim_;
    std::size_t cap = static_cast<std::size_t>(kBlockSteps) * width;
    for (int a = 0; a < dim; ++a) pos[a].assign(cap, 0.0);
    alive.assign(cap, 0);
    n_faces = reflected ? 2 * dim : 0;
    ell.assign(cap * static_cast<std::size_t>(n_faces ? n_faces : 1), 0.0);
  }

  double ell_inc(int face, int slot) const {
    return ell[static_cast<std::size_t>(face) * kBlockSteps * width +
               static_cast<std::size_t>(slot)];
  }
};

struct LaneInfo {
  std::int64_t path = -1;          // global path index, -1 = idle
  std::uint64_t step0 = 0;         // lane's step count at block row 0
};

// Consumers of step blocks.  One virtual call per block (<= 32*W
// steps), so the indirection is invisible next to the stepping cost.
// Paths end either by kill (the sink saw the alive->0 row) or at the
// horizon (survived = true).
class ISink {
 public:
  virtual ~ISink() = default;
  virtual std::uint64_t stream_of(std::int64_t path) const = 0;
  virtual Point x0_of(std::int64_t path) const = 0;
  virtual void begin_path(int lane, std::int64_t path, const Point& x0) = 0;
  virtual void on_block(const StepBlock& b, const LaneInfo* lanes) = 0;
  virtual void end_path(int lane, std::int64_t path, bool survived) = 0;
};

// Exit-kill decision for killed Brownian steps: endpoint test plus a
// one-step Brownian-bridge correction.  `u` is the kill uniform.
// Survival probability factorises over faces (interval/box); the ball
// uses the half-space approximation with boundary distances.  Faces
// whose bridge weight is below exp(-40) are skipped without touching
// libm.
template <int W>
inline typename simd::Pack<W>::MaskD killed_step(
    const DomainSpec& dom, const simd::PackD<W> (&xold)[kMaxDim],
    const simd::PackD<W> (&xnew)[kMaxDim], const simd::PackD<W>& u,
    double dt) {
  using V = simd::PackD<W>;
  using M = typename simd::Pack<W>::MaskD;
  const double cut = 20.0 * dt;  // h1*h2 beyond this: kill prob < 4e-18

  M outside(false);
  V p_survive(1.0);
  bool any_bridge = false;

  auto apply_face = [&](const V& h_old, const V& h_new) {
    outside = outside || (h_new <= V(0.0));
    M near = (h_old * h_new < V(cut)) && !outside;
    if (simd::stdx::any_of(near)) {
      any_bridge = true;
      V arg = V(-2.0 / dt) * h_old * h_new;
      V e = simd::masked_exp<W>(near, arg, 0.0);
      p_survive = p_survive * (V(1.0) - e);
    }
  };

  switch (dom.kind()) {
    case DomainKind::Interval:
      apply_face(xold[0] - V(dom.lo(0)), xnew[0] - V(dom.lo(0)));
      apply_face(V(dom.hi(0)) - xold[0], V(dom.hi(0)) - xnew[0]);
      break;
    case DomainKind::Box:
      for (int a = 0; a < dom.dim(); ++a) {
        apply_face(xold[a] - V(dom.lo(a)), xnew[a] - V(dom.lo(a)));
        apply_face(V(dom.hi(a)) - xold[a], V(dom.hi(a)) - xnew[a]);
      }
      break;
    case DomainKind::Ball: {
      V r2o(0.0), r2n(0.0);
      for (int a = 0; a < dom.dim(); ++a) {
        V dro = xold[a] - V(dom.center(a));
        V drn = xnew[a] - V(dom.center(a));
        r2o = r2o + dro * dro;
        r2n = r2n + drn * drn;
      }
      V ho = V(dom.radius()) - simd::stdx::sqrt(r2o);
      V hn = V(dom.radius()) - simd::stdx::sqrt(r2n);
      apply_face(ho, hn);
      break;
    }
    case DomainKind::FullSpace:
      break;
  }

  M killed = outside;
  if (any_bridge) killed = killed || (u > p_survive);
  return killed;
}

// One reflected coordinate: fold back into [lo, hi].  The fold
// displacement is the Skorokhod regulator increment; the recorded
// boundary local time doubles it, matching the representation
// X = x + B + (1/2) int n dl whose l is the additive functional of the
// full surface measure.  Multiple folds per step are vanishingly rare
// at sane dt but handled; a clamp backstop guarantees termination.
template <int W>
inline void reflect_axis(simd::PackD<W>& x, double lo, double hi,
                         simd::PackD<W>& ell_lo, simd::PackD<W>& ell_hi) {
  using V = simd::PackD<W>;
  for (int iter = 0; iter < 8; ++iter) {
    auto below = x < V(lo);
    auto above = x > V(hi);
    if (!simd::stdx::any_of(below) && !simd::stdx::any_of(above)) return;
    ell_lo = simd::select(below, ell_lo + V(4.0) * (V(lo) - x), ell_lo);
    x = simd::select(below, V(2.0 * lo) - x, x);
    ell_hi = simd::select(above, ell_hi + V(4.0) * (x - V(hi)), ell_hi);
    x = simd::select(above, V(2.0 * hi) - x, x);
  }
  x = simd::stdx::clamp(x, V(lo), V(hi));
}

// Symmetric alpha-stable increment with characteristic function
// exp(-dt*|xi|^alpha), via Chambers-Mallows-Stuck.  u1, u2 in (0,1).
template <int W>
inline simd::PackD<W> stable_increment_1d(const simd::PackD<W>& u1,
                                          const simd::PackD<W>& u2,
                                          double alpha, double scale) {
  using V = simd::PackD<W>;
  const double pi = 3.14159265358979323846;
  V v = V(pi) * (u1 - V(0.5));
  if (alpha == 1.0) return V(scale) * simd::lane_tan(v);
  V w = -simd::lane_log(u2);
  V sav = simd::lane_sin(V(alpha) * v);
  V cv = simd::lane_cos(v);
  V c1 = simd::lane_cos(V(1.0 - alpha) * v);
  V t1 = sav * simd::lane_pow(cv, -1.0 / alpha);
  V t2 = simd::lane_pow(c1 / w, (1.0 - alpha) / alpha);
  return V(scale) * t1 * t2;
}

// One-sided stable S with Laplace transform exp(-u^ap), via Zolotarev's
// representation: S = (A(theta)/W)^((1-ap)/ap) with
//   A(theta) = [sin(ap t)^ap sin((1-ap)t)^(1-ap) / sin t]^(1/(1-ap)).
// Subordinates Brownian motion for isotropic stable increments, d >= 2.
template <int W>
inline simd::PackD<W> positive_stable(const simd::PackD<W>& u1,
                                      const simd::PackD<W>& u2, double ap) {
  using V = simd::PackD<W>;
  const double pi = 3.14159265358979323846;
  V theta = V(pi) * u1;
  V w = -simd::lane_log(u2);
  V s_a = simd::lane_sin(V(ap) * theta);
  V s_1a = simd::lane_sin(V(1.0 - ap) * theta);
  V s = simd::lane_sin(theta);
  V base = simd::lane_pow(s_a, ap) * simd::lane_pow(s_1a, 1.0 - ap) / s;
  return simd::lane_pow(base, 1.0 / ap) *
         simd::lane_pow(w, -(1.0 - ap) / ap);
}

inline std::uint64_t blocks_per_step(const ProcessSpec& spec) {
  int d = spec.domain.dim();
  if (spec.kind == ProcessKind::KilledStable)
    return d == 1 ? 1 : 1 + static_cast<std::uint64_t>((d + 1) / 2);
  return static_cast<std::uint64_t>((d + 2) / 2);
}

template <int W>
struct Stepper {
  using V = simd::PackD<W>;
  using U = simd::PackU64<W>;
  using M = typename simd::Pack<W>::MaskD;

  const ProcessSpec& spec;
  double dt;
  double sqrt_dt;
  double stable_scale;
  std::uint64_t bps;

  Stepper(const ProcessSpec& s, double dt_)
      : spec(s),
        dt(dt_),
        sqrt_dt(std::sqrt(dt_)),
        stable_scale(s.kind == ProcessKind::KilledStable
                         ? std::pow(dt_, (s.domain.dim() >= 2 ? 2.0 : 1.0) /
                                             s.alpha_stable)
                         : 0.0),
        bps(blocks_per_step(s)) {}

  // Advance one step.  `step` holds each lane's own step index; `ell`
  // receives per-face local time increments (reflected variant).
  void advance(V (&x)[kMaxDim], M& alive, const rng::Streams<W>& streams,
               const U& step, V (&ell)[2 * kMaxDim]) const {
    const int d = spec.domain.dim();
    U base = step * U(bps);
    V u[8];
    for (std::uint64_t b = 0; b < bps; ++b)
      streams.block(base + U(b), u[2 * b], u[2 * b + 1]);

    switch (spec.kind) {
      case ProcessKind::KilledBrownian: {
        V xn[kMaxDim];
        for (int a = 0; a < d; ++a)
          xn[a] = x[a] + V(sqrt_dt) * rng::normal_icdf<W>(u[a]);
        M killed =
            killed_step<W>(spec.domain, x, xn, u[d], dt) && alive;
        M keep = alive && !killed;
        for (int a = 0; a < d; ++a) x[a] = simd::select(keep, xn[a], x[a]);
        alive = keep;
        break;
      }
      case ProcessKind::ReflectedBrownian: {
        for (int a = 0; a < d; ++a) {
          V xn = x[a] + V(sqrt_dt) * rng::normal_icdf<W>(u[a]);
          V el(0.0), eh(0.0);
          reflect_axis<W>(xn, spec.domain.lo(a), spec.domain.hi(a), el, eh);
          x[a] = simd::select(alive, xn, x[a]);
          ell[2 * a] = el;
          ell[2 * a + 1] = eh;
        }
        break;
      }
      case ProcessKind::KilledStable: {
        V xn[kMaxDim];
        if (d == 1) {
          xn[0] = x[0] + stable_increment_1d<W>(u[0], u[1], spec.alpha_stable,
                                                stable_scale);
        } else {
          V s = positive_stable<W>(u[0], u[1], spec.alpha_stable / 2.0);
          V amp = simd::stdx::sqrt(V(2.0 * stable_scale) * s);
          for (int a = 0; a < d; ++a)
            xn[a] = x[a] + amp * rng::normal_icdf<W>(u[2 + a]);
        }
        M keep = alive && contains_pack(xn, d);
        for (int a = 0; a < d; ++a) x[a] = simd::select(keep, xn[a], x[a]);
        alive = keep;
        break;
      }
    }
  }

  M contains_pack(const V (&x)[kMaxDim], int d) const {
    const DomainSpec& dom = spec.domain;
    switch (dom.kind()) {
      case DomainKind::Interval:
        return (x[0] > V(dom.lo(0))) && (x[0] < V(dom.hi(0)));
      case DomainKind::Box: {
        M m = (x[0] > V(dom.lo(0))) && (x[0] < V(dom.hi(0)));
        for (int a = 1; a < d; ++a)
          m = m && (x[a] > V(dom.lo(a))) && (x[a] < V(dom.hi(a)));
        return m;
      }
      case DomainKind::Ball: {
        V r2(0.0);
        for (int a = 0; a < d; ++a) {
          V dr = x[a] - V(dom.center(a));
          r2 = r2 + dr * dr;
        }
        return r2 < V(dom.radius() * dom.radius());
      }
      case DomainKind::FullSpace:
        return M(true);
    }
    return M(false);
  }
};

// Runs paths [path_begin, path_end) through `sink`.  n_steps caps
// every path at horizon = n_steps * dt.  Lanes refill at block
// boundaries, each lane keeping its own step clock.
template <int W>
void run_paths(const ProcessSpec& spec, double dt, std::uint64_t n_steps,
               std::uint64_t seed, std::int64_t path_begin,
               std::int64_t path_end, ISink& sink) {
  using V = simd::PackD<W>;
  using U = simd::PackU64<W>;
  using M = typename simd::Pack<W>::MaskD;
  const int d = spec.domain.dim();
  const bool reflected = spec.kind == ProcessKind::ReflectedBrownian;

  Stepper<W> stepper(spec, dt);
  StepBlock block;
  block.resize(W, d, reflected);
  block.dt = dt;

  LaneInfo lanes[W];
  V x[kMaxDim];
  for (int a = 0; a < d; ++a) x[a] = V(0.0);
  M alive(false);
  rng::Streams<W> streams = rng::Streams<W>::seeded(seed);
  U lane_step(0);
  std::int64_t next_path = path_begin;

  auto load_lane = [&](int l) {
    if (next_path >= path_end) return;
    std::int64_t p = next_path++;
    lanes[l].path = p;
    Point x0 = sink.x0_of(p);
    for (int a = 0; a < d; ++a) x[a][l] = x0[static_cast<std::size_t>(a)];
    alive[l] = true;
    streams.set_stream(l, sink.stream_of(p));
    lane_step[l] = 0;
    sink.begin_path(l, p, x0);
  };

  for (int l = 0; l < W; ++l) load_lane(l);

  for (;;) {
    std::uint64_t chunk64 = kBlockSteps;
    bool any_active = false;
    for (int l = 0; l < W; ++l) {
      if (lanes[l].path < 0) continue;
      any_active = true;
      chunk64 = std::min(chunk64, n_steps - lane_step[l]);
    }
    if (!any_active) break;
    int chunk = static_cast<int>(chunk64);

    block.n_steps = chunk;
    for (int l = 0; l < W; ++l) lanes[l].step0 = lane_step[l];

    for (int s = 0; s < chunk; ++s) {
      V ell[2 * kMaxDim];
      for (int f = 0; f < 2 * d; ++f) ell[f] = V(0.0);
      M was_alive = alive;
      stepper.advance(x, alive, streams,
                      lane_step + U(static_cast<std::uint64_t>(s)), ell);
      std::size_t row = static_cast<std::size_t>(s) * W;
      for (int a = 0; a < d; ++a)
        x[a].copy_to(&block.pos[a][row], simd::stdx::element_aligned);
      for (int f = 0; f < block.n_faces; ++f)
        ell[f].copy_to(
            &block.ell[static_cast<std::size_t>(f) * kBlockSteps * W + row],
            simd::stdx::element_aligned);
      for (int l = 0; l < W; ++l) {
        bool active = lanes[l].path >= 0 && was_alive[l];
        block.alive[row + static_cast<std::size_t>(l)] =
            static_cast<std::uint8_t>(active && alive[l]);
        if (!active)
          for (int f = 0; f < block.n_faces; ++f)
            block.ell[static_cast<std::size_t>(f) * kBlockSteps * W + row +
                      static_cast<std::size_t>(l)] = 0.0;
      }
    }

    sink.on_block(block, lanes);

    for (int l = 0; l < W; ++l) {
      if (lanes[l].path < 0) continue;
      lane_step[l] += chunk64;
      bool dead = !alive[l];
      bool done = lane_step[l] >= n_steps;
      if (dead || done) {
        sink.end_path(l, lanes[l].path, !dead);
        lanes[l].path = -1;
        alive[l] = false;
        load_lane(l);
      }
    }
  }
}

enum class KernelTier { Scalar, Avx2 };

// Defined in engine_scalar.cpp / engine_avx2.cpp; engine_dispatch.cpp
// selects per CPU and FKLAB_KERNEL override.
void run_paths_scalar(const ProcessSpec& spec, double dt,
                      std::uint64_t n_steps, std::uint64_t seed,
                      std::int64_t path_begin, std::int64_t path_end,
                      ISink& sink);
void run_paths_avx2(const ProcessSpec& spec, double dt, std::uint64_t n_steps,
                    std::uint64_t seed, std::int64_t path_begin,
                    std::int64_t path_end, ISink& sink);

KernelTier active_kernel_tier();
void force_kernel_tier(KernelTier tier);   // testing hook
void reset_kernel_tier();                  // back to auto detection
const char* kernel_tier_name();

// Dispatched entry point used by every estimator.
void run_paths_auto(const ProcessSpec& spec, double dt, std::uint64_t n_steps,
                    std::uint64_t seed, std::int64_t path_begin,
                    std::int64_t path_end, ISink& sink);

}  // namespace fklab::engine
