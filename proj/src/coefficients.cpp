#include "fklab/coefficients.hpp"

#include <cmath>

namespace fklab {

double probe_monotonicity(const DriverFn2& fn, const DomainSpec& dom,
                          int n_space, int n_vals, double y_range) {
  if (!fn) return 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n_space; ++i) {
    double s = static_cast<double>(i) / n_space;
    Point p{0, 0, 0};
    for (int a = 0; a < dom.dim(); ++a) {
      auto k = static_cast<std::size_t>(a);
      if (dom.kind() == DomainKind::Ball)
        p[k] = dom.center(a) + (2 * s - 1) * dom.radius() * 0.57;
      else if (dom.kind() == DomainKind::FullSpace)
        p[k] = (2 * s - 1) * y_range;
      else
        p[k] = dom.lo(a) + s * (dom.hi(a) - dom.lo(a));
    }
    for (int j = 0; j < n_vals; ++j) {
      for (int k = j + 1; k <= n_vals; ++k) {
        double y = -y_range + 2 * y_range * j / n_vals;
        double yp = -y_range + 2 * y_range * k / n_vals;
        double quot = (fn(p, y) - fn(p, yp)) * (y - yp) / ((y - yp) * (y - yp));
        worst = std::max(worst, quot);
      }
    }
  }
  return worst;
}

void require_coefficients(const Coefficients& c, const DomainSpec& dom) {
  const double slack = 1e-9;
  if (c.lambda < 0)
    throw std::invalid_argument("coefficients: lambda must be >= 0");
  if (c.f && probe_monotonicity(c.f, dom) > c.alpha_mono + slack)
    throw std::invalid_argument(
        "coefficients: f fails the sampled monotonicity bound");
  if (c.g && probe_monotonicity(c.g, dom) > slack)
    throw std::invalid_argument(
        "coefficients: g must be nonincreasing in y (sampled)");
}

MonotoneNormalization normalize_monotone(const Coefficients& c) {
  MonotoneNormalization n;
  if (!std::isfinite(c.alpha_mono))
    throw std::invalid_argument("normalize: alpha_mono must be finite");
  if (c.alpha_mono <= 0.0) return n;
  n.alpha = c.alpha_mono;
  n.identity = false;
  return n;
}

}  // namespace fklab
