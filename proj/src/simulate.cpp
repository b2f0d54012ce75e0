#include "fklab/simulate.hpp"

#include <ostream>
#include <stdexcept>

#include "fklab/engine.hpp"
#include "fklab/mc.hpp"

namespace fklab {

namespace {

class RecordingSink final : public engine::ISink {
 public:
  RecordingSink(PathSample* out, const Point& x0, std::uint64_t stream,
                bool reflected)
      : out_(out), x0_(x0), stream_(stream), reflected_(reflected) {}

  std::uint64_t stream_of(std::int64_t) const override { return stream_; }
  Point x0_of(std::int64_t) const override { return x0_; }

  void begin_path(int, std::int64_t, const Point& x0) override {
    out_->times.push_back(0.0);
    out_->states.push_back(x0);
    if (reflected_) out_->local_time.push_back(0.0);
  }

  void on_block(const engine::StepBlock& b,
                const engine::LaneInfo* li) override {
    for (int s = 0; s < b.n_steps; ++s) {
      if (dead_) return;
      std::size_t slot = static_cast<std::size_t>(s) * b.width;
      double t = static_cast<double>(li[0].step0 + s + 1) * b.dt;
      if (!b.alive[slot]) {
        out_->lifetime = (t - b.dt) + 0.5 * b.dt;
        dead_ = true;
        return;
      }
      Point p{0, 0, 0};
      for (int a = 0; a < b.dim; ++a)
        p[static_cast<std::size_t>(a)] = b.pos[a][slot];
      out_->times.push_back(t);
      out_->states.push_back(p);
      if (reflected_) {
        double inc = 0;
        for (int f = 0; f < b.n_faces; ++f)
          inc += b.ell_inc(f, static_cast<int>(slot));
        out_->local_time.push_back(out_->local_time.back() + inc);
      }
    }
  }

  void end_path(int, std::int64_t, bool) override {}

 private:
  PathSample* out_;
  Point x0_;
  std::uint64_t stream_;
  bool reflected_;
  bool dead_ = false;
};

}  // namespace

PathSample simulate(const ProcessSpec& spec, const Point& x0, double horizon,
                    double dt, const RngStream& rng) {
  spec.validate();
  if (!(dt > 0) || !(horizon > 0))
    throw std::invalid_argument("simulate: need dt > 0 and horizon > 0");

  const DomainSpec& dom = spec.domain;
  bool on_boundary = !dom.contains(x0) && dom.boundary_distance(x0) >= 0.0;
  if (!dom.contains(x0) && !on_boundary)
    throw std::domain_error("simulate: start point outside the closure");

  std::uint64_t n_steps = steps_for(horizon, dt);
  PathSample path;
  path.dim = dom.dim();
  path.horizon = static_cast<double>(n_steps) * dt;

  if (spec.killed() && on_boundary) {
    path.times.push_back(0.0);
    path.states.push_back(x0);
    path.lifetime = 0.0;
    return path;
  }

  RecordingSink sink(&path, x0, rng.stream_id,
                     spec.kind == ProcessKind::ReflectedBrownian);
  engine::run_paths_auto(spec, dt, n_steps, rng.seed, 0, 1, sink);
  return path;
}

void dump_path_csv(std::ostream& os, const PathSample& path,
                   std::int64_t path_id, bool header) {
  if (header) {
    os << "path_id,t";
    for (int a = 0; a < path.dim; ++a) os << ",x_" << (a + 1);
    os << ",alive,local_time\n";
  }
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    os << path_id << ',' << path.times[k];
    for (int a = 0; a < path.dim; ++a)
      os << ',' << path.states[k][static_cast<std::size_t>(a)];
    os << ",1," << (path.local_time.empty() ? 0.0 : path.local_time[k])
       << '\n';
  }
  if (!path.alive_at_end() && !path.states.empty()) {
    // kill row: position frozen at the last in-domain state
    os << path_id << ',' << path.lifetime;
    for (int a = 0; a < path.dim; ++a)
      os << ',' << path.states.back()[static_cast<std::size_t>(a)];
    os << ",0," << (path.local_time.empty() ? 0.0 : path.local_time.back())
       << '\n';
  }
}

}  // namespace fklab
