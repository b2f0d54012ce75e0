// Process specifications and sampled trajectories.
//
// Three Hunt processes are supported, all with generator normalisation
// (1/2)*Laplacian for the Brownian variants:
//   - Brownian motion killed on leaving the domain,
//   - Brownian motion reflected coordinate-wise on an interval/box,
//     carrying its boundary local time,
//   - symmetric alpha-stable process killed on leaving the domain.
// A killing rate lambda >= 0 is carried along but applied by consumers
// as the deterministic weight exp(-lambda*t), never as random killing.

#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "fklab/domain.hpp"

namespace fklab {

enum class ProcessKind { KilledBrownian, ReflectedBrownian, KilledStable };

struct ProcessSpec {
  ProcessKind kind = ProcessKind::KilledBrownian;
  DomainSpec domain = DomainSpec::interval(0, 1);
  double alpha_stable = 1.0;  // index in (0,2), stable variant only
  double killing_rate = 0.0;  // lambda >= 0

  static ProcessSpec killed_brownian(DomainSpec d, double lambda = 0.0) {
    ProcessSpec s;
    s.kind = ProcessKind::KilledBrownian;
    s.domain = std::move(d);
    s.killing_rate = lambda;
    s.validate();
    return s;
  }

  static ProcessSpec reflected_brownian(DomainSpec d, double lambda = 0.0) {
    ProcessSpec s;
    s.kind = ProcessKind::ReflectedBrownian;
    s.domain = std::move(d);
    s.killing_rate = lambda;
    s.validate();
    return s;
  }

  static ProcessSpec killed_stable(DomainSpec d, double alpha,
                                   double lambda = 0.0) {
    ProcessSpec s;
    s.kind = ProcessKind::KilledStable;
    s.domain = std::move(d);
    s.alpha_stable = alpha;
    s.killing_rate = lambda;
    s.validate();
    return s;
  }

  bool killed() const { return kind != ProcessKind::ReflectedBrownian; }

  void validate() const {
    if (killing_rate < 0)
      throw std::invalid_argument("process: killing rate must be >= 0");
    if (kind == ProcessKind::KilledStable &&
        !(alpha_stable > 0 && alpha_stable < 2))
      throw std::invalid_argument("process: stable index must lie in (0,2)");
    if (kind == ProcessKind::ReflectedBrownian &&
        domain.kind() != DomainKind::Interval &&
        domain.kind() != DomainKind::Box)
      throw std::invalid_argument(
          "process: reflection implemented for interval/box domains only");
  }
};

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

inline constexpr double kLifetimeInfinity =
    std::numeric_limits<double>::infinity();

// One simulated trajectory.  Grid states are recorded at 0, dt, 2dt,...
// strictly before the lifetime; when a kill is detected inside a step
// the lifetime is placed at the step midpoint, which makes the
// Lebesgue additive functional of a unit density integrate to exactly
// t ^ lifetime under the trapezoid rule.
struct PathSample {
  std::vector<double> times;
  std::vector<Point> states;
  std::vector<double> local_time;  // reflected variant only, else empty
  double lifetime = kLifetimeInfinity;
  double horizon = 0.0;
  int dim = 1;

  bool alive_at_end() const { return lifetime == kLifetimeInfinity; }
  std::size_t n_points() const { return times.size(); }
};

}  // namespace fklab
