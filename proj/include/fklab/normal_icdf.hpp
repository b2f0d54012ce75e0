// Inverse standard-normal CDF (Wichura's AS241, double precision).
//
// The central branch |p - 1/2| <= 0.425 is a pure rational polynomial
// and is evaluated on all lanes at once; tail lanes (about 15% of
// draws) are fixed up serially since they need log/sqrt.  Mapping
// uniforms through a monotone inverse CDF keeps common-random-number
// couplings monotone, which several estimators here rely on.

#pragma once

#include <cmath>

#include "fklab/pack.hpp"

namespace fklab::rng {

namespace icdf_detail {

inline constexpr double A[8] = {
    3.3871328727963666080e0,  1.3314166789178437745e2,
    1.9715909503065514427e3,  1.3731693765509461125e4,
    4.5921953931549871457e4,  6.7265770927008700853e4,
    3.3430575583588128105e4,  2.5090809287301226727e3};
inline constexpr double B[8] = {
    1.0,                      4.2313330701600911252e1,
    6.8718700749205790830e2,  5.3941960214247511077e3,
    2.1213794301586595867e4,  3.9307895800092710610e4,
    2.8729085735721942674e4,  5.2264952788528545610e3};
inline constexpr double C[8] = {
    1.42343711074968357734e0, 4.63033784615654529590e0,
    5.76949722146069140550e0, 3.64784832476320460504e0,
    1.27045825245236838258e0, 2.41780725177450611770e-1,
    2.27238449892691845833e-2, 7.74545014278341407640e-4};
inline constexpr double D[8] = {
    1.0,                      2.05319162663775882187e0,
    1.67638483018380384940e0, 6.89767334985100004550e-1,
    1.48103976427480074590e-1, 1.51986665636164571966e-2,
    5.47593808499534494600e-4, 1.05075007164441684324e-9};
inline constexpr double E[8] = {
    6.65790464350110377720e0, 5.46378491116411436990e0,
    1.78482653991729133580e0, 2.96560571828504891230e-1,
    2.65321895265761230930e-2, 1.24266094738807843860e-3,
    2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double F[8] = {
    1.0,                      5.99832206555887937690e-1,
    1.36929880922735805310e-1, 1.48753612908506148525e-2,
    7.86869131145613259100e-4, 1.84631831751005468180e-5,
    1.42151175831644588870e-7, 2.04426310338993978564e-15};

template <class V>
inline V poly7(const double (&c)[8], const V& r) {
  V acc = V(c[7]);
  for (int i = 6; i >= 0; --i) acc = acc * r + V(c[i]);
  return acc;
}

inline double tail_value(double p) {
  double pm = p < 0.5 ? p : 1.0 - p;
  double r = std::sqrt(-std::log(pm));
  double v;
  if (r <= 5.0) {
    r -= 1.6;
    v = poly7(C, r) / poly7(D, r);
  } else {
    r -= 5.0;
    v = poly7(E, r) / poly7(F, r);
  }
  return p < 0.5 ? -v : v;
}

}  // namespace icdf_detail

template <int W>
inline simd::PackD<W> normal_icdf(const simd::PackD<W>& p) {
  using V = simd::PackD<W>;
  V q = p - V(0.5);
  V r = V(0.180625) - q * q;
  V central = q * icdf_detail::poly7(icdf_detail::A, r) /
              icdf_detail::poly7(icdf_detail::B, r);
  auto in_tail = (q > V(0.425)) || (q < V(-0.425));
  if (simd::stdx::any_of(in_tail)) {
    for (int i = 0; i < W; ++i)
      if (in_tail[i]) central[i] = icdf_detail::tail_value(p[i]);
  }
  return central;
}

inline double normal_icdf_scalar(double p) {
  return normal_icdf<1>(simd::PackD<1>(p))[0];
}

}  // namespace fklab::rng
