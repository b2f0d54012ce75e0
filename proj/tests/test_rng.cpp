#include "doctest.h"

#include <cmath>

#include "fklab/normal_icdf.hpp"
#include "fklab/philox.hpp"

using namespace fklab;

TEST_CASE("philox4x32-10 known-answer vectors") {
  auto r1 = rng::philox4x32_scalar({0, 0, 0, 0}, {0, 0});
  CHECK(r1[0] == 0x6627e8d5u);
  CHECK(r1[1] == 0xe169c58du);
  CHECK(r1[2] == 0xbc57ac4cu);
  CHECK(r1[3] == 0x9b00dbd8u);

  auto r2 = rng::philox4x32_scalar({0xffffffff, 0xffffffff, 0xffffffff,
                                    0xffffffff},
                                   {0xffffffff, 0xffffffff});
  CHECK(r2[0] == 0x408f276du);
  CHECK(r2[1] == 0x41c83b0eu);
  CHECK(r2[2] == 0xa20bc7c6u);
  CHECK(r2[3] == 0x6d5451fdu);

  auto r3 = rng::philox4x32_scalar({0x243f6a88, 0x85a308d3, 0x13198a2e,
                                    0x03707344},
                                   {0xa4093822, 0x299f31d0});
  CHECK(r3[0] == 0xd16cfe09u);
  CHECK(r3[1] == 0x94fdccebu);
  CHECK(r3[2] == 0x5001e420u);
  CHECK(r3[3] == 0x24126ea1u);
}

TEST_CASE("pack philox matches scalar philox lanewise") {
  auto s = rng::Streams<4>::seeded(0x9E3779B97F4A7C15ull);
  for (int l = 0; l < 4; ++l) s.set_stream(l, 1000u + static_cast<unsigned>(l));
  simd::PackD<4> u0, u1;
  s.block(std::uint64_t{7}, u0, u1);
  for (int l = 0; l < 4; ++l) {
    auto sc = rng::Streams<1>::seeded(0x9E3779B97F4A7C15ull);
    sc.set_stream(0, 1000u + static_cast<unsigned>(l));
    simd::PackD<1> v0, v1;
    sc.block(std::uint64_t{7}, v0, v1);
    CHECK(static_cast<double>(u0[l]) == static_cast<double>(v0[0]));
    CHECK(static_cast<double>(u1[l]) == static_cast<double>(v1[0]));
  }
}

TEST_CASE("uniforms live strictly inside (0,1)") {
  auto s = rng::Streams<1>::seeded(42);
  s.set_stream(0, 0);
  for (std::uint64_t n = 0; n < 1000; ++n) {
    simd::PackD<1> u0, u1;
    s.block(n, u0, u1);
    double a = u0[0], b = u1[0];
    CHECK(a > 0.0);
    CHECK(a < 1.0);
    CHECK(b > 0.0);
    CHECK(b < 1.0);
  }
}

TEST_CASE("normal inverse cdf reference values") {
  CHECK(rng::normal_icdf_scalar(0.5) == 0.0);
  CHECK(rng::normal_icdf_scalar(0.975) ==
        doctest::Approx(1.959963984540054).epsilon(1e-14));
  CHECK(rng::normal_icdf_scalar(0.9) ==
        doctest::Approx(1.2815515655446004).epsilon(1e-14));
  CHECK(rng::normal_icdf_scalar(1e-12) ==
        doctest::Approx(-7.034483825301131).epsilon(1e-13));
  CHECK(rng::normal_icdf_scalar(1e-300) ==
        doctest::Approx(-37.0470962993612).epsilon(1e-13));
  // antisymmetry
  for (double p : {0.01, 0.2, 0.33, 0.49}) {
    CHECK(rng::normal_icdf_scalar(p) ==
          doctest::Approx(-rng::normal_icdf_scalar(1 - p)).epsilon(1e-12));
  }
}

TEST_CASE("pack icdf is bitwise equal to scalar icdf") {
  simd::PackD<4> p([](int i) { return 0.013 + 0.24 * i; });
  auto v = rng::normal_icdf<4>(p);
  for (int i = 0; i < 4; ++i)
    CHECK(static_cast<double>(v[i]) == rng::normal_icdf_scalar(p[i]));
}
