#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cdspin/config.hpp"
#include "cdspin/dynamics.hpp"
#include "cdspin/hamiltonians.hpp"
#include "cdspin/numerics.hpp"
#include "cdspin/pulses.hpp"

namespace cdspin {

struct ExperimentOptions {
  // Grid for field traces and the ε_max observable.
  std::size_t trace_points = kDefaultTracePoints;
  double phi_regularization = kDefaultPhiRegularization;
  StepControl step;
};

FieldSource reference_field(const DriveSchedule& schedule);
FieldSource total_field(const DriveSchedule& schedule);

/// h = (0, −Q, Z̃) interpolated from the trace. A systematic error λ scales
/// the electric-field (time-dependent) parts: Q → (1+λ)Q and
/// Z̃ − Z0 → (1+λ)(Z̃ − Z0).
FieldSource rotated_field(const RotatedTrace& rotated, double lambda = 0.0);

/// A picture's precession source together with the RK4 step count to use.
/// For the rotated picture the trace is sampled at half the RK4 step so every
/// stage time falls on a node.
struct PreparedDrive {
  Picture picture = Picture::reference;
  FieldSource field;
  std::size_t steps = 0;
  std::optional<RotatedTrace> rotated;
};

PreparedDrive prepare_drive(const DotParams& params, Picture picture,
                            const ExperimentOptions& options = {}, double lambda = 0.0);

/// Unitary run from |−1⟩.
SpinorTrajectory evolve_unitary(const DotParams& params, Picture picture,
                                const ExperimentOptions& options = {}, double lambda = 0.0);

/// Master-equation run from r = (0, 0, −1).
BlochTrajectory evolve_dephasing(const DotParams& params, Picture picture, double gamma,
                                 const ExperimentOptions& options = {});

/// H₀ alone, |−1⟩ → F.
double adiabatic_benchmark(const DotParams& params, const ExperimentOptions& options = {});

/// Rotated picture on the field-trace grid (options.trace_points over [0, t_f]).
RotatedTrace rotated_trace(const DotParams& params, const ExperimentOptions& options = {});

/// Rotated-picture x-only fields on the default trace grid. Shared by
/// cd_benchmark, sweep_operation_time and the `fields` command.
XOnlyFields x_only_fields(const DotParams& params, const ExperimentOptions& options = {});

struct CdBenchmark {
  Picture picture = Picture::total;
  double fidelity = 0.0;
  PulseTrace x_drive;
  // Filled for Picture::total.
  std::optional<CdFieldTrace> y_drive;
  // Filled for Picture::rotated.
  std::optional<RotatedTrace> rotated;
  std::optional<XOnlyFields> x_only;
};

/// Counter-diabatic run in the total or rotated picture plus the field traces
/// that implement it.
CdBenchmark cd_benchmark(const DotParams& params, Picture picture,
                         const ExperimentOptions& options = {});

struct SweepResult {
  std::string parameter_name;
  std::string observable_name;
  std::vector<double> parameter_values;
  std::vector<double> observable_values;
  std::optional<numerics::LinearFit> fit;  // log-log, kind=tf only
  DotParams params;
};

std::vector<double> default_tf_values();      // 0.2–11 ns, 25 log-spaced
std::vector<double> default_gamma_values();   // 0–0.05 /ns, 26 points
std::vector<double> default_lambda_values();  // −0.2–0.2, 41 points
std::vector<double> default_comparison_tfs(); // 2, 3, 4 ns

/// ε_max = max(|eps^xn_L|, |eps^xn_R|) per t_f; log-log fit over the values
/// within a factor 10 of the smallest t_f.
SweepResult sweep_operation_time(const DotParams& params, std::span<const double> tf_values,
                                 const ExperimentOptions& options = {});

/// Rotated-picture Bloch dynamics, one result per t_f.
std::vector<SweepResult> sweep_dephasing(const DotParams& params,
                                         std::span<const double> gamma_values,
                                         std::span<const double> tf_values,
                                         const ExperimentOptions& options = {});

/// Rotated-picture unitary dynamics with fields scaled by (1+λ), one result per t_f.
std::vector<SweepResult> sweep_systematic_error(const DotParams& params,
                                                std::span<const double> lambda_values,
                                                std::span<const double> tf_values,
                                                const ExperimentOptions& options = {});

}  // namespace cdspin
