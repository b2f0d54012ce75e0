// Problem data: drivers f(x,y), g(x,y), initial datum phi, killing
// rate, and the monotonicity bookkeeping.  The drivers must satisfy
//   (f(x,y)-f(x,y'))(y-y') <= alpha_mono |y-y'|^2,
//   (g(x,y)-g(x,y'))(y-y') <= 0,
// checked on probe pairs at artifact resolution.

#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "fklab/domain.hpp"
#include "fklab/measures.hpp"
#include "fklab/process.hpp"

namespace fklab {

using DriverFn2 = std::function<double(const Point&, double)>;

inline double clamp_band(double y, double c) {
  if (c < 0) throw std::invalid_argument("clamp: band must be >= 0");
  return std::min(std::max(y, -c), c);
}

struct Coefficients {
  DriverFn2 f;        // null == 0
  DriverFn2 g;        // null == 0
  SpaceFn phi;        // null == 0
  double alpha_mono = 0.0;
  double lambda = 0.0;

  double f_at(const Point& x, double y) const { return f ? f(x, y) : 0.0; }
  double g_at(const Point& x, double y) const { return g ? g(x, y) : 0.0; }
  double phi_at(const Point& x) const { return phi ? phi(x) : 0.0; }
};

// Sampled monotonicity check over probe points and value pairs.
// Returns the largest observed quotient (f(y)-f(y'))(y-y')/|y-y'|^2.
double probe_monotonicity(const DriverFn2& fn, const DomainSpec& dom,
                          int n_space = 17, int n_vals = 9,
                          double y_range = 4.0);

void require_coefficients(const Coefficients& c, const DomainSpec& dom);

// Exponential change of variables removing a positive monotonicity
// constant: with u_hat(t,x) = exp(-alpha t) u(t,x) the transformed
// driver
//   f_hat(t,x,y) = exp(-alpha t) f(x, exp(alpha t) y) - alpha y
// satisfies the <= 0 condition.  Identity when alpha_mono <= 0.
struct MonotoneNormalization {
  double alpha = 0.0;      // the removed constant (0 if none)
  bool identity = true;

  double forward_scale(double t) const {  // u_hat = scale * u
    return identity ? 1.0 : std::exp(-alpha * t);
  }
  double inverse_scale(double t) const { return identity ? 1.0 : std::exp(alpha * t); }

  double driver(const Coefficients& c, double t, const Point& x,
                double y_hat) const {
    if (identity) return c.f_at(x, y_hat);
    double s = inverse_scale(t);
    return c.f_at(x, s * y_hat) / s - alpha * y_hat;
  }
};

MonotoneNormalization normalize_monotone(const Coefficients& c);

struct ProblemSpec {
  DomainSpec domain = DomainSpec::interval(0, 1);
  ProcessSpec process = ProcessSpec::killed_brownian(DomainSpec::interval(0, 1));
  Coefficients coefficients;
  SmoothMeasure measure = SmoothMeasure::zero();

  void validate() const {
    process.validate();
    check_measure_process(measure, process);
    measure.check_nonnegative(domain);
    measure.check_support(domain);
    require_coefficients(coefficients, domain);
  }
};

}  // namespace fklab
