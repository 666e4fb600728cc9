#include "cdspin/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "cdspin/errors.hpp"

namespace cdspin::numerics {

std::vector<double> differentiate(std::span<const double> f, double step) {
  const std::size_t n = f.size();
  if (n < 2) throw GridError("differentiation needs at least 2 samples");
  std::vector<double> d(n);
  if (n < 5) {
    d.front() = (f[1] - f[0]) / step;
    d.back() = (f[n - 1] - f[n - 2]) / step;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (f[i + 1] - f[i - 1]) / (2.0 * step);
    return d;
  }
  const double s = 12.0 * step;
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / s;
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / s;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / s;
  }
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / s;
  d[n - 1] =
      (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / s;
  return d;
}

UniformCubic::UniformCubic(double t0, double step, std::vector<double> values)
    : t0_(t0), step_(step), values_(std::move(values)) {
  if (values_.size() < 2) throw GridError("interpolation needs at least 2 samples");
  if (!(step_ > 0.0)) throw GridError("interpolation step must be positive");
}

double UniformCubic::operator()(double t) const {
  const auto n = static_cast<std::ptrdiff_t>(values_.size());
  const double x = (t - t0_) / step_;
  if (x <= 0.0) return values_.front();
  if (x >= static_cast<double>(n - 1)) return values_.back();

  auto i = static_cast<std::ptrdiff_t>(std::floor(x));
  const double frac = x - static_cast<double>(i);
  if (frac == 0.0) return values_[static_cast<std::size_t>(i)];
  if (n < 4) {
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }
  // Stencil i-1 .. i+2, shifted inward at the ends.
  const std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(i - 1, 0, n - 4);
  const double u = x - static_cast<double>(base);  // position relative to node `base`
  const double* v = values_.data() + base;
  const double l0 = -(u - 1.0) * (u - 2.0) * (u - 3.0) / 6.0;
  const double l1 = u * (u - 2.0) * (u - 3.0) / 2.0;
  const double l2 = -u * (u - 1.0) * (u - 3.0) / 2.0;
  const double l3 = u * (u - 1.0) * (u - 2.0) / 6.0;
  return l0 * v[0] + l1 * v[1] + l2 * v[2] + l3 * v[3];
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ValidationError("line fit needs at least two (x, y) pairs of equal length");
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ValidationError("line fit needs distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

std::vector<double> spaced(double start, double stop, std::size_t count, bool log) {
  if (count == 0) throw GridError("range needs at least one point");
  if (log && !(start > 0.0 && stop > 0.0)) {
    throw GridError("logarithmic range needs positive end points");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = start;
    return out;
  }
  const double last = static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double f = static_cast<double>(i) / last;
    // Two-sided lerp so symmetric ranges hit 0 exactly at the midpoint.
    out[i] = log ? std::exp(std::log(start) * (1.0 - f) + std::log(stop) * f)
                 : start * (1.0 - f) + stop * f;
  }
  out.front() = start;
  out.back() = stop;
  return out;
}

}  // namespace cdspin::numerics
