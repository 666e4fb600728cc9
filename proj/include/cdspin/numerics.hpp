#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cdspin::numerics {

/// First derivative of samples on a uniform grid: 4th-order central stencil in
/// the interior, 4th-order one-sided stencils on the two points at each end.
/// Needs at least 5 samples; fewer falls back to lower order.
std::vector<double> differentiate(std::span<const double> values, double step);

/// Local cubic (4-point Lagrange) interpolation on a uniform grid. Exact at the
/// nodes; clamps to the end values outside [t0, t0 + (n-1)*step].
class UniformCubic {
 public:
  UniformCubic() = default;
  UniformCubic(double t0, double step, std::vector<double> values);

  double operator()(double t) const;

  std::size_t size() const { return values_.size(); }

 private:
  double t0_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

/// Ordinary least squares y = slope*x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// `count` points from start to stop inclusive; geometric spacing when `log`.
std::vector<double> spaced(double start, double stop, std::size_t count, bool log = false);

}  // namespace cdspin::numerics
