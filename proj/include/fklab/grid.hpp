// Spatial and time-space grid functions with piecewise-linear reads.
// Off-grid reads extend by the boundary condition: killed problems read
// 0 beyond the ends, reflected problems clamp to the end values.

#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fklab/util.hpp"

namespace fklab {

enum class BoundaryExtension { ZeroOutside, ClampToEnds };

class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(std::vector<double> xs, std::vector<double> vals,
               BoundaryExtension ext = BoundaryExtension::ZeroOutside)
      : xs_(std::move(xs)), vals_(std::move(vals)), ext_(ext) {
    if (xs_.size() != vals_.size() || xs_.size() < 2)
      throw std::invalid_argument("grid: need >= 2 matching nodes");
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (!(xs_[i] > xs_[i - 1]))
        throw std::invalid_argument("grid: nodes must increase strictly");
    for (double v : vals_)
      if (!std::isfinite(v))
        throw std::invalid_argument("grid: values must be finite");
    uniform_h_ = (xs_.back() - xs_.front()) /
                 static_cast<double>(xs_.size() - 1);
    uniform_ = true;
    for (std::size_t i = 1; i < xs_.size(); ++i)
      if (std::abs(xs_[i] - (xs_.front() + uniform_h_ * static_cast<double>(i))) >
          1e-12 * (1.0 + std::abs(xs_[i])))
        uniform_ = false;
  }

  static GridFunction uniform(double a, double b, int n_nodes,
                              BoundaryExtension ext =
                                  BoundaryExtension::ZeroOutside) {
    return GridFunction(linspace(a, b, n_nodes),
                        std::vector<double>(static_cast<std::size_t>(n_nodes), 0.0),
                        ext);
  }

  const std::vector<double>& nodes() const { return xs_; }
  const std::vector<double>& values() const { return vals_; }
  std::vector<double>& values() { return vals_; }
  BoundaryExtension extension() const { return ext_; }
  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }
  std::size_t size() const { return xs_.size(); }

  double operator()(double x) const {
    if (x <= xs_.front()) {
      if (x == xs_.front()) return vals_.front();
      return ext_ == BoundaryExtension::ZeroOutside ? 0.0 : vals_.front();
    }
    if (x >= xs_.back()) {
      if (x == xs_.back()) return vals_.back();
      return ext_ == BoundaryExtension::ZeroOutside ? 0.0 : vals_.back();
    }
    std::size_t i;
    if (uniform_) {
      i = static_cast<std::size_t>((x - xs_.front()) / uniform_h_);
      if (i >= xs_.size() - 1) i = xs_.size() - 2;
      // guard against rounding at cell edges
      while (x < xs_[i]) --i;
      while (x > xs_[i + 1]) ++i;
    } else {
      std::size_t lo = 0, hi = xs_.size() - 1;
      while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        (xs_[mid] <= x ? lo : hi) = mid;
      }
      i = lo;
    }
    double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return vals_[i] + w * (vals_[i + 1] - vals_[i]);
  }

  double max_abs() const {
    double m = 0;
    for (double v : vals_) m = std::max(m, std::abs(v));
    return m;
  }

  double max_abs_diff(const GridFunction& other) const {
    if (other.size() != size())
      throw std::invalid_argument("grid: size mismatch");
    double m = 0;
    for (std::size_t i = 0; i < vals_.size(); ++i)
      m = std::max(m, std::abs(vals_[i] - other.vals_[i]));
    return m;
  }

 private:
  std::vector<double> xs_;
  std::vector<double> vals_;
  BoundaryExtension ext_ = BoundaryExtension::ZeroOutside;
  bool uniform_ = false;
  double uniform_h_ = 1;
};

// u(t, x) on slice times t_0 < ... < t_K, linear in t between slices.
class TimeSpaceGridFunction {
 public:
  TimeSpaceGridFunction() = default;
  TimeSpaceGridFunction(std::vector<double> times,
                        std::vector<GridFunction> slices)
      : times_(std::move(times)), slices_(std::move(slices)) {
    if (times_.size() != slices_.size() || times_.empty())
      throw std::invalid_argument("time-space grid: size mismatch");
  }

  const std::vector<double>& times() const { return times_; }
  const GridFunction& slice(std::size_t k) const { return slices_[k]; }
  std::size_t n_slices() const { return times_.size(); }

  double operator()(double t, double x) const {
    if (t <= times_.front()) return slices_.front()(x);
    if (t >= times_.back()) return slices_.back()(x);
    std::size_t lo = 0, hi = times_.size() - 1;
    while (hi - lo > 1) {
      std::size_t mid = (lo + hi) / 2;
      (times_[mid] <= t ? lo : hi) = mid;
    }
    double w = (t - times_[lo]) / (times_[lo + 1] - times_[lo]);
    double a = slices_[lo](x), b = slices_[lo + 1](x);
    return a + w * (b - a);
  }

 private:
  std::vector<double> times_;
  std::vector<GridFunction> slices_;
};

}  // namespace fklab
