// Single-trajectory simulation with full recording, plus CSV dump.

#pragma once

#include <iosfwd>

#include "fklab/process.hpp"

namespace fklab {

// Simulates one path on the grid 0, dt, 2dt, ..., horizon (horizon is
// rounded up to a whole number of steps).  States are recorded at grid
// times strictly before the lifetime; the lifetime itself sits at the
// midpoint of the kill step.  Starting a killed variant exactly on the
// boundary yields the lifetime-0 path with the single initial state.
// Identical (seed, stream_id, dt) reproduce the sample bit for bit.
PathSample simulate(const ProcessSpec& spec, const Point& x0, double horizon,
                    double dt, const RngStream& rng);

// Columns: path_id, t, x_1..x_d, alive, local_time.
void dump_path_csv(std::ostream& os, const PathSample& path,
                   std::int64_t path_id, bool header = true);

}  // namespace fklab
