#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace cdspin {

/// Amplitudes (c₁, c₋₁) in the {|1⟩, |−1⟩} basis.
using Spinor = Eigen::Vector2cd;
/// r with ρ = (I + r·σ)/2.
using BlochVector = Eigen::Vector3d;

/// Precession vector h(t) in rad/ns, H(t) = (ħ/2) h·σ. For a frame with
/// coefficients (X, Y, Z) this is h = (X, -Y, Z).
using FieldSource = std::function<Eigen::Vector3d(double)>;

struct StepControl {
  // Lower bound on the number of RK4 steps over [0, t_f].
  std::size_t min_steps = 4000;
  // Upper bound on h * max|h(t)|.
  double max_rotation_per_step = 0.05;
  // Overrides both of the above when set.
  std::optional<std::size_t> steps;
  double norm_drift_limit = 1e-6;
};

/// Number of fixed RK4 steps used for this source and control.
std::size_t step_count(const FieldSource& field, double t_f, const StepControl& control);

/// max |h(t)| sampled on a fine uniform grid of [0, t_f].
double max_precession_rate(const FieldSource& field, double t_f);

template <class State>
struct Trajectory {
  std::vector<double> grid;
  std::vector<State> states;
  double fidelity = 0.0;
  // Spinor: max ||ψ|² − 1|. Bloch: max ||r| − |r0| e^{−4γt}|.
  double max_norm_drift = 0.0;
  // min Tr ρ² = (1 + |r|²)/2.
  double min_purity = 1.0;
};

using SpinorTrajectory = Trajectory<Spinor>;
using BlochTrajectory = Trajectory<BlochVector>;

Spinor spin_down();  // |−1⟩
Spinor spin_up();    // |1⟩

BlochVector to_bloch(const Spinor& psi);
Eigen::Matrix2cd density_matrix(const BlochVector& r);

/// F = ρ₁₁ of the final state.
double fidelity(const Spinor& psi);
double fidelity(const BlochVector& r);
template <class State>
double fidelity(const Trajectory<State>& trajectory) {
  return fidelity(trajectory.states.back());
}

/// Fixed-step classical RK4 for iħ∂ₜψ = Hψ. The norm is monitored, never
/// renormalised; NormDriftError when it drifts past the control's limit.
SpinorTrajectory propagate_schrodinger(const FieldSource& field, const Spinor& psi0, double t_f,
                                       const StepControl& control = {});

/// ṙ = h × r − 4γ r, the Bloch form of
/// ρ̇ = −(i/ħ)[H, ρ] − (γ/2) Σᵢ [σᵢ, [σᵢ, ρ]].
BlochTrajectory propagate_bloch(const FieldSource& field, const BlochVector& r0, double gamma,
                                double t_f, const StepControl& control = {});

}  // namespace cdspin
