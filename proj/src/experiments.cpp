#include "cdspin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <memory>
#include <thread>

#include "cdspin/errors.hpp"

namespace cdspin {

namespace {

// Runs fn(0..n-1) on a few worker threads; results keep input order.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> results(n);
  const std::size_t workers =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::future<void>> jobs;
  jobs.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) results[i] = fn(i);
    }));
  }
  for (auto& job : jobs) job.get();
  return results;
}

Eigen::Vector3d precession(double X, double Y, double Z) { return {X, -Y, Z}; }

double rotated_rate(const RotatedTrace& rotated, double lambda) {
  double rate = 0.0;
  for (std::size_t i = 0; i < rotated.grid.size(); ++i) {
    const double q = (1.0 + lambda) * rotated.Q[i];
    const double z = rotated.Z0 + (1.0 + lambda) * (rotated.Ztilde[i] - rotated.Z0);
    rate = std::max(rate, std::hypot(q, z));
  }
  return rate;
}

void check_positive(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw ValidationError(std::string(what) + " values must be positive");
    }
  }
}

}  // namespace

FieldSource reference_field(const DriveSchedule& schedule) {
  return [schedule](double t) {
    const auto c = schedule.reference(t);
    return precession(0.0, c.Y, c.Z);
  };
}

FieldSource total_field(const DriveSchedule& schedule) {
  return [schedule](double t) {
    const auto c = schedule.reference(t);
    return precession(counterdiabatic_coefficient(c.Y, c.Z, c.dY, c.dZ), c.Y, c.Z);
  };
}

FieldSource rotated_field(const RotatedTrace& rotated, double lambda) {
  const std::size_t n = rotated.grid.size();
  if (n < 2) throw GridError("rotated trace is empty");
  const double step = (rotated.grid.back() - rotated.grid.front()) / static_cast<double>(n - 1);
  std::vector<double> q(n), z(n);
  for (std::size_t i = 0; i < n; ++i) {
    q[i] = (1.0 + lambda) * rotated.Q[i];
    z[i] = rotated.Z0 + (1.0 + lambda) * (rotated.Ztilde[i] - rotated.Z0);
  }
  struct Interpolants {
    numerics::UniformCubic q, z;
  };
  auto interp = std::make_shared<const Interpolants>(
      Interpolants{numerics::UniformCubic(rotated.grid.front(), step, std::move(q)),
                   numerics::UniformCubic(rotated.grid.front(), step, std::move(z))});
  return [interp](double t) { return precession(0.0, interp->q(t), interp->z(t)); };
}

PreparedDrive prepare_drive(const DotParams& params, Picture picture,
                            const ExperimentOptions& options, double lambda) {
  const DriveSchedule schedule(params);
  PreparedDrive drive;
  drive.picture = picture;
  if (picture != Picture::rotated) {
    if (lambda != 0.0) {
      throw ValidationError("systematic field errors apply to the rotated (x-only) protocol");
    }
    drive.field = picture == Picture::total ? total_field(schedule) : reference_field(schedule);
    drive.steps = step_count(drive.field, params.t_f, options.step);
    return drive;
  }

  std::size_t steps = step_count(total_field(schedule), params.t_f, options.step);
  // The rotated rate includes φ̇, so the step may need to grow once the trace exists.
  for (int attempt = 0;; ++attempt) {
    const auto grid = uniform_grid(params.t_f, 2 * steps + 1);
    const auto frames = schedule.frames(Picture::total, grid);
    drive.rotated = rotated_picture(frames, schedule.reduced().Z0, options.phi_regularization);
    if (options.step.steps || attempt == 4) break;
    const double needed = std::ceil(params.t_f * rotated_rate(*drive.rotated, lambda) /
                                    options.step.max_rotation_per_step);
    if (needed <= static_cast<double>(steps)) break;
    steps = static_cast<std::size_t>(needed);
  }
  drive.steps = steps;
  drive.field = rotated_field(*drive.rotated, lambda);
  return drive;
}

SpinorTrajectory evolve_unitary(const DotParams& params, Picture picture,
                                const ExperimentOptions& options, double lambda) {
  const auto drive = prepare_drive(params, picture, options, lambda);
  StepControl control = options.step;
  control.steps = drive.steps;
  return propagate_schrodinger(drive.field, spin_down(), params.t_f, control);
}

BlochTrajectory evolve_dephasing(const DotParams& params, Picture picture, double gamma,
                                 const ExperimentOptions& options) {
  if (gamma < 0.0) throw NegativeRateError("dephasing rate must be non-negative");
  const auto drive = prepare_drive(params, picture, options);
  StepControl control = options.step;
  control.steps = drive.steps;
  return propagate_bloch(drive.field, BlochVector(0.0, 0.0, -1.0), gamma, params.t_f, control);
}

double adiabatic_benchmark(const DotParams& params, const ExperimentOptions& options) {
  return evolve_unitary(params, Picture::reference, options).fidelity;
}

RotatedTrace rotated_trace(const DotParams& params, const ExperimentOptions& options) {
  const DriveSchedule schedule(params);
  const auto grid = uniform_grid(params.t_f, options.trace_points);
  return rotated_picture(schedule.frames(Picture::total, grid), schedule.reduced().Z0,
                         options.phi_regularization);
}

XOnlyFields x_only_fields(const DotParams& params, const ExperimentOptions& options) {
  return synthesize_x_only_fields(rotated_trace(params, options), params);
}

CdBenchmark cd_benchmark(const DotParams& params, Picture picture,
                         const ExperimentOptions& options) {
  if (picture == Picture::reference) {
    throw ValidationError("cd_benchmark runs the total or rotated picture");
  }
  const DriveSchedule schedule(params);
  CdBenchmark out;
  out.picture = picture;
  out.fidelity = evolve_unitary(params, picture, options).fidelity;
  out.x_drive = trace(params, options.trace_points);
  if (picture == Picture::total) {
    out.y_drive = cd_field_synthesis(schedule, out.x_drive.grid);
  } else {
    out.rotated = rotated_trace(params, options);
    out.x_only = synthesize_x_only_fields(*out.rotated, params);
  }
  return out;
}

std::vector<double> default_tf_values() { return numerics::spaced(0.2, 11.0, 25, true); }
std::vector<double> default_gamma_values() { return numerics::spaced(0.0, 0.05, 26); }
std::vector<double> default_lambda_values() { return numerics::spaced(-0.2, 0.2, 41); }
std::vector<double> default_comparison_tfs() { return {2.0, 3.0, 4.0}; }

SweepResult sweep_operation_time(const DotParams& params, std::span<const double> tf_values,
                                 const ExperimentOptions& options) {
  check_positive(tf_values, "t_f");
  SweepResult out;
  out.parameter_name = "tf_ns";
  out.observable_name = "eps_max";
  out.params = params;
  out.parameter_values.assign(tf_values.begin(), tf_values.end());
  out.observable_values = parallel_map(tf_values.size(), [&](std::size_t i) {
    return x_only_fields(params.with_tf(tf_values[i]), options).max_field();
  });

  if (tf_values.empty()) return out;
  const double shortest = *std::min_element(tf_values.begin(), tf_values.end());
  std::vector<double> log_tf, log_eps;
  for (std::size_t i = 0; i < tf_values.size(); ++i) {
    if (tf_values[i] <= 10.0 * shortest * (1.0 + 1e-12) && out.observable_values[i] > 0.0) {
      log_tf.push_back(std::log(tf_values[i]));
      log_eps.push_back(std::log(out.observable_values[i]));
    }
  }
  const bool distinct =
      log_tf.size() >= 2 && *std::max_element(log_tf.begin(), log_tf.end()) >
                                *std::min_element(log_tf.begin(), log_tf.end());
  if (distinct) out.fit = numerics::fit_line(log_tf, log_eps);
  return out;
}

std::vector<SweepResult> sweep_dephasing(const DotParams& params,
                                         std::span<const double> gamma_values,
                                         std::span<const double> tf_values,
                                         const ExperimentOptions& options) {
  check_positive(tf_values, "t_f");
  for (double g : gamma_values) {
    if (g < 0.0) throw NegativeRateError("dephasing rate must be non-negative");
  }
  std::vector<SweepResult> results;
  for (double tf : tf_values) {
    const DotParams p = params.with_tf(tf);
    const auto drive = prepare_drive(p, Picture::rotated, options);
    StepControl control = options.step;
    control.steps = drive.steps;
    SweepResult r;
    r.parameter_name = "gamma";
    r.observable_name = "fidelity";
    r.params = p;
    r.parameter_values.assign(gamma_values.begin(), gamma_values.end());
    r.observable_values = parallel_map(gamma_values.size(), [&](std::size_t i) {
      return propagate_bloch(drive.field, BlochVector(0.0, 0.0, -1.0), gamma_values[i], tf,
                             control)
          .fidelity;
    });
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<SweepResult> sweep_systematic_error(const DotParams& params,
                                                std::span<const double> lambda_values,
                                                std::span<const double> tf_values,
                                                const ExperimentOptions& options) {
  check_positive(tf_values, "t_f");
  std::vector<SweepResult> results;
  for (double tf : tf_values) {
    const DotParams p = params.with_tf(tf);
    SweepResult r;
    r.parameter_name = "lambda";
    r.observable_name = "fidelity";
    r.params = p;
    r.parameter_values.assign(lambda_values.begin(), lambda_values.end());
    r.observable_values = parallel_map(lambda_values.size(), [&](std::size_t i) {
      return evolve_unitary(p, Picture::rotated, options, lambda_values[i]).fidelity;
    });
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace cdspin
