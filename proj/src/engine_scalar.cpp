// Scalar reference instantiation of the path kernels (lane width 1).

#include "fklab/engine.hpp"

namespace fklab::engine {

void run_paths_scalar(const ProcessSpec& spec, double dt,
                      std::uint64_t n_steps, std::uint64_t seed,
                      std::int64_t path_begin, std::int64_t path_end,
                      ISink& sink) {
  run_paths<1>(spec, dt, n_steps, seed, path_begin, path_end, sink);
}

}  // namespace fklab::engine
