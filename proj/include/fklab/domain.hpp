// State-space geometry: interval, box, ball, or full space.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fklab {

inline constexpr int kMaxDim = 3;

using Point = std::array<double, kMaxDim>;

inline Point make_point(std::initializer_list<double> xs) {
  Point p{0.0, 0.0, 0.0};
  int i = 0;
  for (double v : xs) p[static_cast<std::size_t>(i++)] = v;
  return p;
}

enum class DomainKind { Interval, Box, Ball, FullSpace };

class DomainSpec {
 public:
  static DomainSpec interval(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("interval: need a < b");
    DomainSpec d;
    d.kind_ = DomainKind::Interval;
    d.dim_ = 1;
    d.lo_[0] = a;
    d.hi_[0] = b;
    return d;
  }

  static DomainSpec box(const std::vector<double>& lows,
                        const std::vector<double>& highs) {
    if (lows.empty() || lows.size() != highs.size() ||
        lows.size() > static_cast<std::size_t>(kMaxDim))
      throw std::invalid_argument("box: need 1..3 matching bounds");
    DomainSpec d;
    d.kind_ = DomainKind::Box;
    d.dim_ = static_cast<int>(lows.size());
    for (int i = 0; i < d.dim_; ++i) {
      if (!(lows[static_cast<std::size_t>(i)] < highs[static_cast<std::size_t>(i)]))
        throw std::invalid_argument("box: need low < high per axis");
      d.lo_[static_cast<std::size_t>(i)] = lows[static_cast<std::size_t>(i)];
      d.hi_[static_cast<std::size_t>(i)] = highs[static_cast<std::size_t>(i)];
    }
    return d;
  }

  static DomainSpec ball(const std::vector<double>& center, double radius) {
    if (center.empty() || center.size() > static_cast<std::size_t>(kMaxDim))
      throw std::invalid_argument("ball: dimension 1..3");
    if (!(radius > 0)) throw std::invalid_argument("ball: radius > 0");
    DomainSpec d;
    d.kind_ = DomainKind::Ball;
    d.dim_ = static_cast<int>(center.size());
    for (int i = 0; i < d.dim_; ++i)
      d.lo_[static_cast<std::size_t>(i)] = center[static_cast<std::size_t>(i)];
    d.radius_ = radius;
    return d;
  }

  static DomainSpec full_space(int dim) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("full_space: dimension 1..3");
    DomainSpec d;
    d.kind_ = DomainKind::FullSpace;
    d.dim_ = dim;
    return d;
  }

  DomainKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool bounded() const { return kind_ != DomainKind::FullSpace; }
  double lo(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }
  double hi(int axis) const { return hi_[static_cast<std::size_t>(axis)]; }
  double radius() const { return radius_; }
  double center(int axis) const { return lo_[static_cast<std::size_t>(axis)]; }

  bool contains(const Point& x) const {
    switch (kind_) {
      case DomainKind::Interval:
        return x[0] > lo_[0] && x[0] < hi_[0];
      case DomainKind::Box:
        for (int i = 0; i < dim_; ++i) {
          auto k = static_cast<std::size_t>(i);
          if (!(x[k] > lo_[k] && x[k] < hi_[k])) return false;
        }
        return true;
      case DomainKind::Ball:
        return dist2_to_center(x) < radius_ * radius_;
      case DomainKind::FullSpace:
        return true;
    }
    return false;
  }

  bool contains_closure(const Point& x) const {
    return contains(x) || boundary_distance(x) == 0.0;
  }

  // Distance to the boundary for points in the closure; 0 on it.
  // Negative values flag points outside.
  double boundary_distance(const Point& x) const {
    switch (kind_) {
      case DomainKind::Interval:
        return std::min(x[0] - lo_[0], hi_[0] - x[0]);
      case DomainKind::Box: {
        double d = std::numeric_limits<double>::infinity();
        for (int i = 0; i < dim_; ++i) {
          auto k = static_cast<std::size_t>(i);
          d = std::min(d, std::min(x[k] - lo_[k], hi_[k] - x[k]));
        }
        return d;
      }
      case DomainKind::Ball:
        return radius_ - std::sqrt(dist2_to_center(x));
      case DomainKind::FullSpace:
        return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  double volume() const {
    switch (kind_) {
      case DomainKind::Interval:
        return hi_[0] - lo_[0];
      case DomainKind::Box: {
        double v = 1.0;
        for (int i = 0; i < dim_; ++i) {
          auto k = static_cast<std::size_t>(i);
          v *= hi_[k] - lo_[k];
        }
        return v;
      }
      case DomainKind::Ball: {
        static const double pi = 3.14159265358979323846;
        if (dim_ == 1) return 2 * radius_;
        if (dim_ == 2) return pi * radius_ * radius_;
        return 4.0 / 3.0 * pi * radius_ * radius_ * radius_;
      }
      case DomainKind::FullSpace:
        return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  std::string describe() const {
    switch (kind_) {
      case DomainKind::Interval:
        return "interval(" + std::to_string(lo_[0]) + "," +
               std::to_string(hi_[0]) + ")";
      case DomainKind::Box:
        return "box(d=" + std::to_string(dim_) + ")";
      case DomainKind::Ball:
        return "ball(d=" + std::to_string(dim_) +
               ",r=" + std::to_string(radius_) + ")";
      case DomainKind::FullSpace:
        return "fullspace(d=" + std::to_string(dim_) + ")";
    }
    return "?";
  }

 private:
  double dist2_to_center(const Point& x) const {
    double s = 0;
    for (int i = 0; i < dim_; ++i) {
      auto k = static_cast<std::size_t>(i);
      double d = x[k] - lo_[k];
      s += d * d;
    }
    return s;
  }

  DomainKind kind_ = DomainKind::Interval;
  int dim_ = 1;
  Point lo_{0, 0, 0};  // ball: center
  Point hi_{1, 0, 0};
  double radius_ = 0;
};

}  // namespace fklab
