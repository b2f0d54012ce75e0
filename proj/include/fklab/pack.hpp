// Lane abstraction for the path kernels.
//
// A Pack bundles W doubles (and W uint64 counters) that advance W
// independent Monte Carlo paths in lockstep.  Width 1 is the scalar
// reference; width 4 maps to AVX2.  All transcendentals go through
// per-lane libm calls so that a lane computes the same bit pattern
// regardless of W; pure arithmetic is IEEE-identical lanewise as long
// as the build disables FP contraction (see top-level CMakeLists).

#pragma once

#include <experimental/simd>

#include <cmath>
#include <cstdint>

namespace fklab::simd {

namespace stdx = std::experimental;

template <int W>
struct Pack {
  static constexpr int width = W;
  using abi_d = stdx::simd_abi::deduce_t<double, W>;
  using abi_u = stdx::simd_abi::deduce_t<std::uint64_t, W>;
  using Dbl = stdx::simd<double, abi_d>;
  using U64 = stdx::simd<std::uint64_t, abi_u>;
  using MaskD = typename Dbl::mask_type;
  using MaskU = typename U64::mask_type;
};

template <int W>
using PackD = typename Pack<W>::Dbl;
template <int W>
using PackU64 = typename Pack<W>::U64;
template <int W>
using PackM = typename Pack<W>::MaskD;

// uint64 -> double, exact for values < 2^53.
template <int W>
inline PackD<W> to_double(const PackU64<W>& u) {
  return stdx::static_simd_cast<PackD<W>>(u);
}

template <int W>
inline typename Pack<W>::MaskD to_dmask(const typename Pack<W>::MaskU& m) {
  return stdx::static_simd_cast<typename Pack<W>::MaskD>(m);
}

// select(m, a, b): a where m, else b.
template <class V, class M>
inline V select(const M& m, const V& a, const V& b) {
  V r = b;
  stdx::where(m, r) = a;
  return r;
}

// Per-lane libm wrappers.  These are the only transcendental entry
// points the kernels use; keeping them lane-serial guarantees bitwise
// agreement between pack widths.
#define FKLAB_LANE_FN(name, fn)                                      \
  template <class V>                                                 \
  inline V name(const V& x) {                                        \
    V r = x;                                                         \
    for (std::size_t i = 0; i < V::size(); ++i) r[i] = fn(x[i]);     \
    return r;                                                        \
  }

FKLAB_LANE_FN(lane_exp, std::exp)
FKLAB_LANE_FN(lane_log, std::log)
FKLAB_LANE_FN(lane_sin, std::sin)
FKLAB_LANE_FN(lane_cos, std::cos)
FKLAB_LANE_FN(lane_tan, std::tan)
#undef FKLAB_LANE_FN

template <class V>
inline V lane_pow(const V& x, double e) {
  V r = x;
  for (std::size_t i = 0; i < V::size(); ++i) r[i] = std::pow(x[i], e);
  return r;
}

// exp evaluated only on lanes where m is set; other lanes get `fill`.
// Skipped lanes never reach libm, so the cost scales with the number
// of boundary-adjacent steps rather than with all steps.
template <int W>
inline PackD<W> masked_exp(const typename Pack<W>::MaskD& m, const PackD<W>& x,
                           double fill) {
  PackD<W> r = PackD<W>(fill);
  for (int i = 0; i < W; ++i)
    if (m[i]) r[i] = std::exp(x[i]);
  return r;
}

}  // namespace fklab::simd
