#pragma once

#include <cstddef>
#include <vector>

#include "cdspin/config.hpp"

namespace cdspin {

/// One tanh step of the x vector potential in reduced units:
/// u(t) = amplitude * (tanh((t - center*t_f) / (width*t_f)) + 1).
struct PulseShape {
  double amplitude = 0.0;  // rad/ns
  double center = 0.5;     // fraction of t_f
  double width = 0.1;      // fraction of t_f
  double t_f = 1.0;        // ns

  double value(double t) const;
  double rate(double t) const;       // du/dt
  double curvature(double t) const;  // d²u/dt²
};

inline double potential(const PulseShape& shape, double t) { return shape.value(t); }
inline double potential_rate(const PulseShape& shape, double t) { return shape.rate(t); }
inline double potential_curvature(const PulseShape& shape, double t) { return shape.curvature(t); }

PulseShape left_pulse(const DotParams& params, double amplitude);
PulseShape right_pulse(const DotParams& params, double amplitude);

/// Sampled x-drive. Potentials are reported in the Dresselhaus scaling
/// (u_j = A0_beta * shape_j), fields are eps_j = -du_j/dt from the analytic rate.
struct PulseTrace {
  std::vector<double> grid;
  std::vector<double> uL, uR;
  std::vector<double> duL, duR;
  std::vector<double> epsL, epsR;
};

inline constexpr std::size_t kDefaultTracePoints = 2001;

/// n_points equally spaced times on [0, t_f], both ends included.
std::vector<double> uniform_grid(double t_f, std::size_t n_points);

PulseTrace trace(const DotParams& params, std::size_t n_points = kDefaultTracePoints);

}  // namespace cdspin
