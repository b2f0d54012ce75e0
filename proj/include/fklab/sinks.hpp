// Step-block consumers.  Each sink accumulates one functional per path
// in time order and writes it to a per-path slot, so results do not
// depend on lane width or thread count.  Quadrature conventions:
//   - density additive functionals use the trapezoid rule on the step
//     grid, with a half-step increment dt/2 * value(last state) on the
//     kill step (the lifetime sits at the step midpoint, making the
//     unit-density functional integrate to exactly t ^ lifetime);
//   - surface additive functionals are Stieltjes sums of per-face
//     local-time increments, with the weight read at the face
//     projection of the current state;
//   - exponential rate weights exp(-rate*t) advance by one multiply
//     per step (decay factor precomputed), keeping runs cheap and
//     bit-reproducible.

#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <vector>

#include "fklab/engine.hpp"
#include "fklab/grid.hpp"
#include "fklab/measures.hpp"
#include "fklab/philox.hpp"

namespace fklab::sinks {

inline constexpr int kMaxLanes = 8;

// Start-point / stream assignment shared by all sinks.  stream_id =
// stream_base + path index; uniform starts draw the start point from a
// dedicated Philox stream keyed by the path, for m-sampled estimates.
struct StartPlan {
  Point x0{0, 0, 0};
  std::uint64_t stream_base = 0;
  bool uniform_start = false;
  DomainSpec domain = DomainSpec::interval(0, 1);
  std::uint64_t seed = 0;

  Point start_of(std::int64_t path) const {
    if (!uniform_start) return x0;
    rng::Streams<1> s = rng::Streams<1>::seeded(seed);
    s.set_stream(0, rng::mix64(0x757e69666f726dull, static_cast<std::uint64_t>(path)));
    simd::PackD<1> u0, u1;
    Point p{0, 0, 0};
    for (int a = 0; a < domain.dim(); ++a) {
      s.block(static_cast<std::uint64_t>(a / 2), u0, u1);
      double u = (a % 2 == 0) ? u0[0] : u1[0];
      p[static_cast<std::size_t>(a)] =
          domain.lo(a) + u * (domain.hi(a) - domain.lo(a));
    }
    return p;
  }
};

class PathSinkBase : public engine::ISink {
 public:
  explicit PathSinkBase(StartPlan plan) : plan_(std::move(plan)) {}

  std::uint64_t stream_of(std::int64_t path) const final {
    return plan_.stream_base + static_cast<std::uint64_t>(path);
  }
  Point x0_of(std::int64_t path) const final { return plan_.start_of(path); }

 protected:
  struct Lane {
    std::int64_t path = -1;
    bool living = false;
    double t = 0;
    Point x{0, 0, 0};
  };

  Lane lanes_[kMaxLanes];
  StartPlan plan_;

  static Point read_pos(const engine::StepBlock& b, std::size_t slot) {
    Point p{0, 0, 0};
    for (int a = 0; a < b.dim; ++a)
      p[static_cast<std::size_t>(a)] = b.pos[a][slot];
    return p;
  }
};

// Lifetime of killed paths; survivors report the horizon and bump the
// shared survivor counter (a bias flag for the caller).
class ExitTimeSink final : public PathSinkBase {
 public:
  ExitTimeSink(StartPlan plan, double horizon, std::vector<double>* out,
               std::atomic<std::int64_t>* survivors)
      : PathSinkBase(std::move(plan)),
        horizon_(horizon),
        out_(out),
        survivors_(survivors) {}

  void begin_path(int lane, std::int64_t path, const Point&) override {
    lanes_[lane] = {path, true, 0.0, {0, 0, 0}};
  }

  void on_block(const engine::StepBlock& b,
                const engine::LaneInfo* li) override {
    for (int s = 0; s < b.n_steps; ++s) {
      for (int l = 0; l < b.width; ++l) {
        Lane& ln = lanes_[l];
        if (li[l].path < 0 || !ln.living) continue;
        std::size_t slot = static_cast<std::size_t>(s) * b.width +
                           static_cast<std::size_t>(l);
        if (b.alive[slot]) {
          ln.t = static_cast<double>(li[l].step0 + s + 1) * b.dt;
        } else {
          (*out_)[static_cast<std::size_t>(ln.path)] = ln.t + 0.5 * b.dt;
          ln.living = false;
        }
      }
    }
  }

  void end_path(int, std::int64_t path, bool survived) override {
    if (survived) {
      (*out_)[static_cast<std::size_t>(path)] = horizon_;
      survivors_->fetch_add(1, std::memory_order_relaxed);
    }
  }

 private:
  double horizon_;
  std::vector<double>* out_;
  std::atomic<std::int64_t>* survivors_;
};

// fn(X_t) * 1{t < lifetime} at fixed mark steps; 0 for dead paths.
class MarkFunctionSink final : public PathSinkBase {
 public:
  MarkFunctionSink(StartPlan plan, SpaceFn fn, std::vector<std::uint64_t> marks,
                   std::vector<std::vector<double>>* out)
      : PathSinkBase(std::move(plan)),
        fn_(std::move(fn)),
        marks_(std::move(marks)),
        out_(out) {}

  void begin_path(int lane, std::int64_t path, const Point& x0) override {
    lanes_[lane] = {path, true, 0.0, x0};
    next_mark_[lane] = 0;
    if (!marks_.empty() && marks_[0] == 0) {
      (*out_)[0][static_cast<std::size_t>(path)] = fn_(x0);
      next_mark_[lane] = 1;
    }
  }

  void on_block(const engine::StepBlock& b,
                const engine::LaneInfo* li) override {
    for (int s = 0; s < b.n_steps; ++s) {
      for (int l = 0; l < b.width; ++l) {
        Lane& ln = lanes_[l];
        if (li[l].path < 0 || !ln.living) continue;
        std::size_t slot = static_cast<std::size_t>(s) * b.width +
                           static_cast<std::size_t>(l);
        if (!b.alive[slot]) {
          ln.living = false;
          continue;
        }
        std::uint64_t step = li[l].step0 + static_cast<std::uint64_t>(s) + 1;
        if (next_mark_[l] < marks_.size() && step == marks_[next_mark_[l]]) {
          (*out_)[next_mark_[l]][static_cast<std::size_t>(ln.path)] =
              fn_(read_pos(b, slot));
          ++next_mark_[l];
        }
      }
    }
  }

  void end_path(int, std::int64_t, bool) override {}

 private:
  SpaceFn fn_;
  std::vector<std::uint64_t> marks_;
  std::vector<std::vector<double>>* out_;
  std::size_t next_mark_[kMaxLanes] = {};
};

// I = int_0^{lifetime ^ horizon ^ mark} exp(-rate*t) w(X_t) dA_t.
// With capture_step set, accumulation freezes there (A is flat after
// the lifetime, so dead paths simply keep their last value).
class AfIntegralSink final : public PathSinkBase {
 public:
  AfIntegralSink(StartPlan plan, const SmoothMeasure* measure, SpaceFn weight,
                 double rate, double dt, std::vector<double>* out,
                 std::uint64_t capture_step = 0,
                 std::atomic<std::int64_t>* survivors = nullptr)
      : PathSinkBase(std::move(plan)),
        measure_(measure),
        weight_(std::move(weight)),
        rate_(rate),
        decay_(rate == 0.0 ? 1.0 : std::exp(-rate * dt)),
        out_(out),
        capture_step_(capture_step),
        survivors_(survivors) {}

  void begin_path(int lane, std::int64_t path, const Point& x0) override {
    lanes_[lane] = {path, true, 0.0, x0};
    acc_[lane] = 0.0;
    expf_[lane] = 1.0;
    frozen_[lane] = false;
    val_prev_[lane] = density_value(x0);
  }

  void on_block(const engine::StepBlock& b,
                const engine::LaneInfo* li) override {
    const bool surface = measure_->needs_local_time();
    for (int s = 0; s < b.n_steps; ++s) {
      for (int l = 0; l < b.width; ++l) {
        Lane& ln = lanes_[l];
        if (li[l].path < 0 || !ln.living || frozen_[l]) continue;
        std::size_t slot = static_cast<std::size_t>(s) * b.width +
                           static_cast<std::size_t>(l);
        double e_prev = expf_[l];
        double e_new = e_prev * decay_;
        if (!b.alive[slot]) {
          if (!surface) acc_[l] += 0.5 * b.dt * e_prev * val_prev_[l];
          ln.living = false;
          continue;
        }
        Point xn = read_pos(b, slot);
        if (surface) {
          for (int f = 0; f < b.n_faces; ++f) {
            double inc = b.ell_inc(f, static_cast<int>(slot));
            if (inc != 0.0) {
              Point fp = xn;
              int axis = f / 2;
              fp[static_cast<std::size_t>(axis)] =
                  f % 2 == 0 ? plan_.domain.lo(axis) : plan_.domain.hi(axis);
              double w = measure_->surface_weight(fp) *
                         (weight_ ? weight_(fp) : 1.0);
              acc_[l] += e_new * w * inc;
            }
          }
        } else {
          double v = density_value(xn);
          acc_[l] += 0.5 * b.dt * (e_prev * val_prev_[l] + e_new * v);
          val_prev_[l] = v;
        }
        expf_[l] = e_new;
        ln.x = xn;
        std::uint64_t step = li[l].step0 + static_cast<std::uint64_t>(s) + 1;
        ln.t = static_cast<double>(step) * b.dt;
        if (capture_step_ != 0 && step >= capture_step_) frozen_[l] = true;
      }
    }
  }

  void end_path(int lane, std::int64_t path, bool survived) override {
    (*out_)[static_cast<std::size_t>(path)] = acc_[lane];
    if (survived && survivors_)
      survivors_->fetch_add(1, std::memory_order_relaxed);
  }

 private:
  double density_value(const Point& x) const {
    if (measure_->needs_local_time()) return 0.0;
    return measure_->density(x) * (weight_ ? weight_(x) : 1.0);
  }

  const SmoothMeasure* measure_;
  SpaceFn weight_;
  double rate_;
  double decay_;
  std::vector<double>* out_;
  std::uint64_t capture_step_;
  std::atomic<std::int64_t>* survivors_ = nullptr;
  double acc_[kMaxLanes] = {};
  double expf_[kMaxLanes] = {};
  double val_prev_[kMaxLanes] = {};
  bool frozen_[kMaxLanes] = {};
};

using DriverFn = std::function<double(const Point&, double)>;
using ReadFn = std::function<double(const Point&)>;

// One backward-scheme expectation:
//   value = exp(-lambda*(horizon)) * terminal(X_H) * 1{survived}
//         + int_0^{lifetime ^ H} exp(-lambda*t)
//               ( f(X_t, read(X_t)) dt + g(X_t, read(X_t)) dA_t ).
// Serves the parabolic one-step rule (terminal = previous slice), the
// elliptic Picard sweep (terminal = 0 or the truncation datum phi) and
// the a-priori / truncation windows via the offset knobs.
class DriverIntegralSink final : public PathSinkBase {
 public:
  struct Config {
    DriverFn f;                 // may be null (== 0)
    DriverFn g;                 // may be null
    const SmoothMeasure* measure = nullptr;
    ReadFn read;                // y-argument source; null reads 0
    std::function<double(double, const Point&)> read_time;  // overrides read
    ReadFn terminal;            // null: no terminal term
    double lambda = 0;
    double dt = 0;
    double horizon = 0;
    std::uint64_t window_begin = 0;  // steps; integrate on (begin, end]
    std::uint64_t window_end = ~0ull;
  };

  DriverIntegralSink(StartPlan plan, Config cfg, std::vector<double>* out)
      : PathSinkBase(std::move(plan)),
        cfg_(std::move(cfg)),
        decay_(cfg_.lambda == 0.0 ? 1.0 : std::exp(-cfg_.lambda * cfg_.dt)),
        out_(out) {}

  void begin_path(int lane, std::int64_t path, const Point& x0) override {
    lanes_[lane] = {path, true, 0.0, x0};
    acc_[lane] = 0.0;
    expf_[lane] = 1.0;
    fval_prev_[lane] = f_value(x0, 0.0);
    gval_prev_[lane] = g_density_value(x0, 0.0);
  }

  void on_block(const engine::StepBlock& b,
                const engine::LaneInfo* li) override {
    const bool surface = cfg_.measure && cfg_.measure->needs_local_time();
    for (int s = 0; s < b.n_steps; ++s) {
      for (int l = 0; l < b.width; ++l) {
        Lane& ln = lanes_[l];
        if (li[l].path < 0 || !ln.living) continue;
        std::size_t slot = static_cast<std::size_t>(s) * b.width +
                           static_cast<std::size_t>(l);
        std::uint64_t step = li[l].step0 + static_cast<std::uint64_t>(s) + 1;
        double e_prev = expf_[l];
        double e_new = e_prev * decay_;
        bool in_window = step > cfg_.window_begin && step <= cfg_.window_end;
        if (!b.alive[slot]) {
          if (in_window)
            acc_[l] +=
                0.5 * b.dt * e_prev * (fval_prev_[l] + gval_prev_[l]);
          ln.living = false;
          continue;
        }
        Point xn = read_pos(b, slot);
        double t_new = static_cast<double>(step) * b.dt;
        double fv = f_value(xn, t_new);
        double gv = g_density_value(xn, t_new);
        if (in_window) {
          acc_[l] += 0.5 * b.dt *
                     (e_prev * (fval_prev_[l] + gval_prev_[l]) +
                      e_new * (fv + gv));
          if (surface) {
            for (int f = 0; f < b.n_faces; ++f) {
              double inc = b.ell_inc(f, static_cast<int>(slot));
              if (inc != 0.0) {
                Point fp = xn;
                int axis = f / 2;
                fp[static_cast<std::size_t>(axis)] = f % 2 == 0
                                                         ? plan_.domain.lo(axis)
                                                         : plan_.domain.hi(axis);
                acc_[l] += e_new * g_surface_value(fp, t_new) * inc;
              }
            }
          }
        }
        fval_prev_[l] = fv;
        gval_prev_[l] = gv;
        expf_[l] = e_new;
        ln.x = xn;
        ln.t = t_new;
      }
    }
  }

  void end_path(int lane, std::int64_t path, bool survived) override {
    double v = acc_[lane];
    if (survived && cfg_.terminal)
      v += expf_[lane] * cfg_.terminal(lanes_[lane].x);
    (*out_)[static_cast<std::size_t>(path)] = v;
  }

 private:
  double read_y(const Point& x, double t) const {
    if (cfg_.read_time) return cfg_.read_time(t, x);
    return cfg_.read ? cfg_.read(x) : 0.0;
  }

  double f_value(const Point& x, double t) const {
    return cfg_.f ? cfg_.f(x, read_y(x, t)) : 0.0;
  }

  // density part of g dA (zero for surface measures)
  double g_density_value(const Point& x, double t) const {
    if (!cfg_.g || !cfg_.measure || cfg_.measure->needs_local_time())
      return 0.0;
    return cfg_.g(x, read_y(x, t)) * cfg_.measure->density(x);
  }

  double g_surface_value(const Point& xb, double t) const {
    return cfg_.g(xb, read_y(xb, t)) * cfg_.measure->surface_weight(xb);
  }

  Config cfg_;
  double decay_;
  std::vector<double>* out_;
  double acc_[kMaxLanes] = {};
  double expf_[kMaxLanes] = {};
  double fval_prev_[kMaxLanes] = {};
  double gval_prev_[kMaxLanes] = {};
};

// Marks where paths are still alive: 1{lifetime > t_mark} * fn(X_mark),
// accumulated additively over several marks into one slot.  Used for
// truncation-tail terms |phi(X_n)| + |phi(X_m)|.
class AliveMarksAddSink final : public PathSinkBase {
 public:
  AliveMarksAddSink(StartPlan plan, SpaceFn fn,
                    std::vector<std::uint64_t> marks, std::vector<double>* out)
      : PathSinkBase(std::move(plan)),
        fn_(std::move(fn)),
        marks_(std::move(marks)),
        out_(out) {}

  void begin_path(int lane, std::int64_t path, const Point& x0) override {
    lanes_[lane] = {path, true, 0.0, x0};
    acc_[lane] = 0.0;
    next_mark_[lane] = 0;
  }

  void on_block(const engine::StepBlock& b,
                const engine::LaneInfo* li) override {
    for (int s = 0; s < b.n_steps; ++s) {
      for (int l = 0; l < b.width; ++l) {
        Lane& ln = lanes_[l];
        if (li[l].path < 0 || !ln.living) continue;
        std::size_t slot = static_cast<std::size_t>(s) * b.width +
                           static_cast<std::size_t>(l);
        if (!b.alive[slot]) {
          ln.living = false;
          continue;
        }
        std::uint64_t step = li[l].step0 + static_cast<std::uint64_t>(s) + 1;
        if (next_mark_[l] < marks_.size() && step == marks_[next_mark_[l]]) {
          acc_[l] += fn_(read_pos(b, slot));
          ++next_mark_[l];
        }
      }
    }
  }

  void end_path(int lane, std::int64_t path, bool) override {
    (*out_)[static_cast<std::size_t>(path)] += acc_[lane];
  }

 private:
  SpaceFn fn_;
  std::vector<std::uint64_t> marks_;
  std::vector<double>* out_;
  double acc_[kMaxLanes] = {};
  std::size_t next_mark_[kMaxLanes] = {};
};

}  // namespace fklab::sinks
