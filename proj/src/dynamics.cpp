#include "cdspin/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "cdspin/errors.hpp"

namespace cdspin {

namespace {

using namespace std::complex_literals;

constexpr std::size_t kRateSamples = 8001;

void check_span(const FieldSource& field, double t_f) {
  if (!field) throw ValidationError("no field source supplied");
  if (!(t_f > 0.0) || !std::isfinite(t_f)) throw ValidationError("t_f must be positive");
}

// dψ/dt = −(i/2)(h·σ)ψ
Spinor schrodinger_rhs(const Eigen::Vector3d& h, const Spinor& psi) {
  Spinor out;
  out(0) = -0.5i * (h.z() * psi(0) + std::complex<double>(h.x(), -h.y()) * psi(1));
  out(1) = -0.5i * (std::complex<double>(h.x(), h.y()) * psi(0) - h.z() * psi(1));
  return out;
}

BlochVector bloch_rhs(const Eigen::Vector3d& h, const BlochVector& r, double gamma) {
  return h.cross(r) - 4.0 * gamma * r;
}

template <class State, class Rhs, class Monitor>
Trajectory<State> integrate(const FieldSource& field, const State& y0, double t_f,
                            std::size_t steps, Rhs rhs, Monitor monitor) {
  Trajectory<State> out;
  out.grid.reserve(steps + 1);
  out.states.reserve(steps + 1);
  out.grid.push_back(0.0);
  out.states.push_back(y0);
  monitor(out, 0.0, y0);

  const double h = t_f / static_cast<double>(steps);
  State y = y0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = t_f * (static_cast<double>(k) / static_cast<double>(steps));
    const auto h0 = field(t);
    const auto hm = field(t + 0.5 * h);
    const auto h1 = field(t + h);
    const State k1 = rhs(h0, y);
    const State k2 = rhs(hm, State(y + (0.5 * h) * k1));
    const State k3 = rhs(hm, State(y + (0.5 * h) * k2));
    const State k4 = rhs(h1, State(y + h * k3));
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double t_next = t_f * (static_cast<double>(k + 1) / static_cast<double>(steps));
    out.grid.push_back(t_next);
    out.states.push_back(y);
    monitor(out, t_next, y);
  }
  out.fidelity = fidelity(out.states.back());
  return out;
}

}  // namespace

double max_precession_rate(const FieldSource& field, double t_f) {
  check_span(field, t_f);
  double rate = 0.0;
  for (std::size_t i = 0; i < kRateSamples; ++i) {
    const double t = t_f * (static_cast<double>(i) / static_cast<double>(kRateSamples - 1));
    rate = std::max(rate, field(t).norm());
  }
  return rate;
}

std::size_t step_count(const FieldSource& field, double t_f, const StepControl& control) {
  if (control.steps) {
    if (*control.steps == 0) throw ValidationError("step count must be positive");
    return *control.steps;
  }
  const double rate = max_precession_rate(field, t_f);
  const double needed = std::ceil(t_f * rate / control.max_rotation_per_step);
  return std::max(control.min_steps, static_cast<std::size_t>(needed));
}

Spinor spin_down() { return Spinor(0.0, 1.0); }
Spinor spin_up() { return Spinor(1.0, 0.0); }

BlochVector to_bloch(const Spinor& psi) {
  const std::complex<double> coherence = std::conj(psi(0)) * psi(1);
  return {2.0 * coherence.real(), 2.0 * coherence.imag(), std::norm(psi(0)) - std::norm(psi(1))};
}

Eigen::Matrix2cd density_matrix(const BlochVector& r) {
  Eigen::Matrix2cd rho;
  rho(0, 0) = 0.5 * (1.0 + r.z());
  rho(1, 1) = 0.5 * (1.0 - r.z());
  rho(0, 1) = 0.5 * std::complex<double>(r.x(), -r.y());
  rho(1, 0) = 0.5 * std::complex<double>(r.x(), r.y());
  return rho;
}

double fidelity(const Spinor& psi) { return std::clamp(std::norm(psi(0)), 0.0, 1.0); }

double fidelity(const BlochVector& r) { return std::clamp(0.5 * (1.0 + r.z()), 0.0, 1.0); }

SpinorTrajectory propagate_schrodinger(const FieldSource& field, const Spinor& psi0, double t_f,
                                       const StepControl& control) {
  check_span(field, t_f);
  if (std::abs(psi0.squaredNorm() - 1.0) > 1e-12) {
    throw ValidationError("initial spinor must be normalised");
  }
  const std::size_t steps = step_count(field, t_f, control);
  auto monitor = [&](SpinorTrajectory& tr, double t, const Spinor& psi) {
    const double drift = std::abs(psi.squaredNorm() - 1.0);
    tr.max_norm_drift = std::max(tr.max_norm_drift, drift);
    if (drift > control.norm_drift_limit) {
      std::ostringstream msg;
      msg << "norm drift " << drift << " at t = " << t << " ns exceeds "
          << control.norm_drift_limit << " (" << steps << " steps)";
      throw NormDriftError(msg.str());
    }
  };
  return integrate<Spinor>(field, psi0, t_f, steps, schrodinger_rhs, monitor);
}

BlochTrajectory propagate_bloch(const FieldSource& field, const BlochVector& r0, double gamma,
                                double t_f, const StepControl& control) {
  check_span(field, t_f);
  if (gamma < 0.0) throw NegativeRateError("dephasing rate must be non-negative");
  if (r0.norm() > 1.0 + 1e-12) throw ValidationError("initial Bloch vector lies outside the ball");
  const std::size_t steps = step_count(field, t_f, control);
  const double r0_norm = r0.norm();
  auto monitor = [&](BlochTrajectory& tr, double t, const BlochVector& r) {
    const double expected = r0_norm * std::exp(-4.0 * gamma * t);
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(r.norm() - expected));
    tr.min_purity = std::min(tr.min_purity, 0.5 * (1.0 + r.squaredNorm()));
  };
  auto rhs = [gamma](const Eigen::Vector3d& h, const BlochVector& r) {
    return bloch_rhs(h, r, gamma);
  };
  return integrate<BlochVector>(field, r0, t_f, steps, rhs, monitor);
}

}  // namespace cdspin
