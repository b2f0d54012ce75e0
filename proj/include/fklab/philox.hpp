// Philox4x32-10 counter RNG (Salmon et al., Random123), pack-generic.
//
// One "block" is keyed by (seed, stream, block index) and yields four
// 32-bit words, i.e. two 53-bit uniforms.  Streams never have to be
// skipped ahead: the path engines derive the block index from the step
// number, so sampling order is a pure function of (seed, stream) and
// identical under any lane width or worker count.

#pragma once

#include <array>
#include <cstdint>

#include "fklab/pack.hpp"

namespace fklab::rng {

inline constexpr std::uint64_t kPhiloxM0 = 0xD2511F53;
inline constexpr std::uint64_t kPhiloxM1 = 0xCD9E8D57;
inline constexpr std::uint64_t kPhiloxW0 = 0x9E3779B9;
inline constexpr std::uint64_t kPhiloxW1 = 0xBB67AE85;

// Counter words are carried in uint64 lanes but always hold 32-bit
// values, so a 64-bit multiply gives hi:lo exactly.
template <int W>
struct PhiloxBlock {
  simd::PackU64<W> x0, x1;  // out0|out1<<32, out2|out3<<32
};

template <int W>
inline PhiloxBlock<W> philox4x32(simd::PackU64<W> c0, simd::PackU64<W> c1,
                                 simd::PackU64<W> c2, simd::PackU64<W> c3,
                                 simd::PackU64<W> k0, simd::PackU64<W> k1) {
  using U = simd::PackU64<W>;
  const U mask32(0xFFFFFFFFull);
  for (int round = 0; round < 10; ++round) {
    U p0 = c0 * U(kPhiloxM0);
    U p1 = c2 * U(kPhiloxM1);
    U hi0 = p0 >> 32, lo0 = p0 & mask32;
    U hi1 = p1 >> 32, lo1 = p1 & mask32;
    U n0 = hi1 ^ c1 ^ k0;
    U n2 = hi0 ^ c3 ^ k1;
    c0 = n0;
    c1 = lo1;
    c2 = n2;
    c3 = lo0;
    k0 = (k0 + U(kPhiloxW0)) & mask32;
    k1 = (k1 + U(kPhiloxW1)) & mask32;
  }
  return {c0 | (c1 << 32), c2 | (c3 << 32)};
}

// Scalar convenience used by tests and non-batched callers.
inline std::array<std::uint32_t, 4> philox4x32_scalar(
    const std::array<std::uint32_t, 4>& ctr,
    const std::array<std::uint32_t, 2>& key) {
  using U = simd::PackU64<1>;
  auto b = philox4x32<1>(U(ctr[0]), U(ctr[1]), U(ctr[2]), U(ctr[3]), U(key[0]),
                         U(key[1]));
  std::uint64_t a = b.x0[0], c = b.x1[0];
  return {static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
          static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
}

// (x >> 11 + 1/2) * 2^-53: strictly inside (0,1), symmetric about 1/2.
template <int W>
inline simd::PackD<W> to_u01(const simd::PackU64<W>& x) {
  const double scale = 0x1.0p-53;
  return (simd::to_double<W>(x >> 11) + simd::PackD<W>(0.5)) *
         simd::PackD<W>(scale);
}

// Per-lane generator state: key = seed, counter = (block, stream).
template <int W>
struct Streams {
  simd::PackU64<W> key0, key1;      // seed lo/hi
  simd::PackU64<W> stream_lo, stream_hi;

  static Streams seeded(std::uint64_t seed) {
    Streams s;
    s.key0 = simd::PackU64<W>(seed & 0xFFFFFFFFull);
    s.key1 = simd::PackU64<W>(seed >> 32);
    s.stream_lo = simd::PackU64<W>(0);
    s.stream_hi = simd::PackU64<W>(0);
    return s;
  }

  void set_stream(int lane, std::uint64_t stream_id) {
    stream_lo[lane] = stream_id & 0xFFFFFFFFull;
    stream_hi[lane] = stream_id >> 32;
  }

  // Uniforms u[0], u[1] of per-lane block `n`.
  void block(const simd::PackU64<W>& n, simd::PackD<W>& u0,
             simd::PackD<W>& u1) const {
    using U = simd::PackU64<W>;
    auto b = philox4x32<W>(n & U(0xFFFFFFFFull), n >> 32, stream_lo, stream_hi,
                           key0, key1);
    u0 = to_u01<W>(b.x0);
    u1 = to_u01<W>(b.x1);
  }

  void block(std::uint64_t n, simd::PackD<W>& u0, simd::PackD<W>& u1) const {
    block(simd::PackU64<W>(n), u0, u1);
  }
};

// 64-bit mix used to derive sub-stream ids from structured tuples
// (slice, grid point, path, ...).  splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ mix64(b));
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return mix64(a ^ mix64(b ^ mix64(c)));
}

}  // namespace fklab::rng
