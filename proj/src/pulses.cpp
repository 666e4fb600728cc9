#include "cdspin/pulses.hpp"

#include <cmath>

#include "cdspin/errors.hpp"

namespace cdspin {

// tanh(x) + 1 = 2 / (1 + e^{-2x}) and sech via cosh keep full relative
// precision in the tails, where 1 - tanh² cancels.
double PulseShape::value(double t) const {
  const double x = (t - center * t_f) / (width * t_f);
  return amplitude * 2.0 / (1.0 + std::exp(-2.0 * x));
}

double PulseShape::rate(double t) const {
  const double tau = width * t_f;
  const double sech = 1.0 / std::cosh((t - center * t_f) / tau);
  return amplitude * sech * sech / tau;
}

double PulseShape::curvature(double t) const {
  const double tau = width * t_f;
  const double x = (t - center * t_f) / tau;
  const double sech = 1.0 / std::cosh(x);
  return -2.0 * amplitude * std::tanh(x) * sech * sech / (tau * tau);
}

PulseShape left_pulse(const DotParams& params, double amplitude) {
  return {amplitude, params.a_L, params.w_L, params.t_f};
}

PulseShape right_pulse(const DotParams& params, double amplitude) {
  return {amplitude, params.a_R, params.w_R, params.t_f};
}

std::vector<double> uniform_grid(double t_f, std::size_t n_points) {
  if (n_points < 2) throw GridError("a time grid needs at least 2 points");
  if (!(t_f > 0.0)) throw GridError("grid span must be positive");
  std::vector<double> grid(n_points);
  const double n = static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) grid[i] = t_f * (static_cast<double>(i) / n);
  return grid;
}

PulseTrace trace(const DotParams& params, std::size_t n_points) {
  PulseTrace tr;
  tr.grid = uniform_grid(params.t_f, n_points);
  const auto left = left_pulse(params, params.A0_beta);
  const auto right = right_pulse(params, params.A0_beta);
  for (auto* v : {&tr.uL, &tr.uR, &tr.duL, &tr.duR, &tr.epsL, &tr.epsR}) v->reserve(n_points);
  for (double t : tr.grid) {
    tr.uL.push_back(left.value(t));
    tr.uR.push_back(right.value(t));
    tr.duL.push_back(left.rate(t));
    tr.duR.push_back(right.rate(t));
    tr.epsL.push_back(-tr.duL.back());
    tr.epsR.push_back(-tr.duR.back());
  }
  return tr;
}

}  // namespace cdspin
