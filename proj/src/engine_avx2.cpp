// AVX2 instantiation of the path kernels (lane width 4).  This file is
// the only one compiled with -mavx2; it must stay free of symbols that
// other TUs also instantiate with different flags.

#include "fklab/engine.hpp"

namespace fklab::engine {

#if defined(__AVX2__)

void run_paths_avx2(const ProcessSpec& spec, double dt, std::uint64_t n_steps,
                    std::uint64_t seed, std::int64_t path_begin,
                    std::int64_t path_end, ISink& sink) {
  run_paths<4>(spec, dt, n_steps, seed, path_begin, path_end, sink);
}

#else

void run_paths_avx2(const ProcessSpec& spec, double dt, std::uint64_t n_steps,
                    std::uint64_t seed, std::int64_t path_begin,
                    std::int64_t path_end, ISink& sink) {
  run_paths_scalar(spec, dt, n_steps, seed, path_begin, path_end, sink);
}

#endif

}  // namespace fklab::engine
