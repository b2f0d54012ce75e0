// Smooth measures driving the additive functionals: densities against
// Lebesgue measure, surface measure on the boundary (paired with the
// reflected process, whose local time is its additive functional), and
// mollified point masses (hat kernel of bandwidth eps).

#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "fklab/domain.hpp"
#include "fklab/process.hpp"

namespace fklab {

enum class MeasureKind { LebesgueDensity, SurfaceMeasure, MollifiedPoint };

using SpaceFn = std::function<double(const Point&)>;

class SmoothMeasure {
 public:
  static SmoothMeasure zero() {
    SmoothMeasure m;
    m.kind_ = MeasureKind::LebesgueDensity;
    m.const_value_ = 0.0;
    m.is_constant_ = true;
    return m;
  }

  static SmoothMeasure lebesgue_density(SpaceFn beta,
                                        std::optional<double> mass_hint = {}) {
    SmoothMeasure m;
    m.kind_ = MeasureKind::LebesgueDensity;
    m.fn_ = std::move(beta);
    m.mass_hint_ = mass_hint;
    return m;
  }

  static SmoothMeasure lebesgue_constant(double c) {
    if (c < 0) throw std::invalid_argument("measure: density must be >= 0");
    SmoothMeasure m;
    m.kind_ = MeasureKind::LebesgueDensity;
    m.const_value_ = c;
    m.is_constant_ = true;
    return m;
  }

  static SmoothMeasure surface(SpaceFn weight) {
    SmoothMeasure m;
    m.kind_ = MeasureKind::SurfaceMeasure;
    m.fn_ = std::move(weight);
    return m;
  }

  static SmoothMeasure surface_constant(double w) {
    if (w < 0) throw std::invalid_argument("measure: weight must be >= 0");
    SmoothMeasure m;
    m.kind_ = MeasureKind::SurfaceMeasure;
    m.const_value_ = w;
    m.is_constant_ = true;
    return m;
  }

  // Hat kernel: mass * (1 - |x - x0|/eps)+ / eps per axis (1D only).
  static SmoothMeasure mollified_point(double x0, double mass, double eps) {
    if (!(mass > 0) || !(eps > 0))
      throw std::invalid_argument("measure: mass, eps must be > 0");
    SmoothMeasure m;
    m.kind_ = MeasureKind::MollifiedPoint;
    m.x0_ = x0;
    m.mass_ = mass;
    m.eps_ = eps;
    m.mass_hint_ = mass;
    return m;
  }

  MeasureKind kind() const { return kind_; }
  bool needs_local_time() const { return kind_ == MeasureKind::SurfaceMeasure; }
  bool is_zero() const { return is_constant_ && const_value_ == 0.0; }
  std::optional<double> mass_hint() const { return mass_hint_; }
  double point_center() const { return x0_; }
  double point_mass() const { return mass_; }
  double bandwidth() const { return eps_; }

  // Density value (LebesgueDensity / MollifiedPoint).
  double density(const Point& x) const {
    if (kind_ == MeasureKind::MollifiedPoint) {
      double u = std::abs(x[0] - x0_) / eps_;
      return u >= 1.0 ? 0.0 : mass_ * (1.0 - u) / eps_;
    }
    if (is_constant_) return const_value_;
    return fn_(x);
  }

  // Surface weight at a boundary point.
  double surface_weight(const Point& xb) const {
    if (is_constant_) return const_value_;
    return fn_(xb);
  }

  // Nonnegativity probe on sampled points; mirrors the smooth-measure
  // positivity requirement at artifact resolution.
  void check_nonnegative(const DomainSpec& dom, int probes = 64) const {
    if (is_constant_ || kind_ == MeasureKind::MollifiedPoint) return;
    for (int i = 0; i <= probes; ++i) {
      double s = static_cast<double>(i) / probes;
      Point p{0, 0, 0};
      if (kind_ == MeasureKind::SurfaceMeasure) {
        if (dom.kind() != DomainKind::Interval) continue;
        p[0] = i % 2 == 0 ? dom.lo(0) : dom.hi(0);
        if (surface_weight(p) < 0)
          throw std::invalid_argument("measure: negative surface weight");
        continue;
      }
      for (int a = 0; a < dom.dim(); ++a) {
        auto k = static_cast<std::size_t>(a);
        if (dom.kind() == DomainKind::Ball) {
          p[k] = dom.center(a) + (2 * s - 1) * dom.radius() * 0.57;
        } else {
          p[k] = dom.lo(a) + s * (dom.hi(a) - dom.lo(a));
        }
      }
      if (density(p) < 0)
        throw std::invalid_argument("measure: negative density");
    }
  }

  // Mollifier support must stay inside the domain.
  void check_support(const DomainSpec& dom) const {
    if (kind_ != MeasureKind::MollifiedPoint) return;
    Point lo{x0_ - eps_, 0, 0}, hi{x0_ + eps_, 0, 0};
    if (!dom.contains(lo) || !dom.contains(hi))
      throw std::invalid_argument(
          "measure: mollifier support reaches the boundary");
  }

 private:
  MeasureKind kind_ = MeasureKind::LebesgueDensity;
  SpaceFn fn_;
  bool is_constant_ = false;
  double const_value_ = 1.0;
  double x0_ = 0, mass_ = 1, eps_ = 0.1;
  std::optional<double> mass_hint_;
};

inline void check_measure_process(const SmoothMeasure& m,
                                  const ProcessSpec& spec) {
  if (m.needs_local_time() && spec.kind != ProcessKind::ReflectedBrownian)
    throw std::invalid_argument(
        "surface measure requires the reflected process (no local time "
        "recorded otherwise)");
}

}  // namespace fklab
