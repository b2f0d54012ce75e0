// Runtime kernel selection.  AVX2 when the CPU has it, scalar
// otherwise; FKLAB_KERNEL=scalar|simd overrides for testing.  Both
// tiers produce bit-identical output (asserted by the equivalence
// tests), so the choice never affects results, only speed.

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "fklab/engine.hpp"

namespace fklab::engine {

namespace {

KernelTier detect_tier() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2")) return KernelTier::Avx2;
#endif
  return KernelTier::Scalar;
}

KernelTier initial_tier() {
  if (const char* env = std::getenv("FKLAB_KERNEL")) {
    if (std::strcmp(env, "scalar") == 0) return KernelTier::Scalar;
    if (std::strcmp(env, "simd") == 0 || std::strcmp(env, "avx2") == 0)
      return detect_tier() == KernelTier::Avx2 ? KernelTier::Avx2
                                               : KernelTier::Scalar;
  }
  return detect_tier();
}

std::atomic<KernelTier> g_tier{initial_tier()};

}  // namespace

KernelTier active_kernel_tier() { return g_tier.load(); }

void force_kernel_tier(KernelTier tier) {
  if (tier == KernelTier::Avx2 && detect_tier() != KernelTier::Avx2)
    tier = KernelTier::Scalar;
  g_tier.store(tier);
}

void reset_kernel_tier() { g_tier.store(initial_tier()); }

const char* kernel_tier_name() {
  return active_kernel_tier() == KernelTier::Avx2 ? "avx2" : "scalar";
}

void run_paths_auto(const ProcessSpec& spec, double dt, std::uint64_t n_steps,
                    std::uint64_t seed, std::int64_t path_begin,
                    std::int64_t path_end, ISink& sink) {
  if (active_kernel_tier() == KernelTier::Avx2)
    run_paths_avx2(spec, dt, n_steps, seed, path_begin, path_end, sink);
  else
    run_paths_scalar(spec, dt, n_steps, seed, path_begin, path_end, sink);
}

}  // namespace fklab::engine
