#include "cdspin/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "cdspin/errors.hpp"
#include "cdspin/numerics.hpp"

namespace cdspin {

namespace {

double gap_squared_checked(double Y, double Z) {
  const double gap2 = Y * Y + Z * Z;
  if (gap2 == 0.0) throw DegenerateGapError("reference gap closed: Y = Z = 0");
  return gap2;
}

double uniform_step(std::span<const double> grid) {
  if (grid.size() < 2) throw GridError("a time grid needs at least 2 points");
  const double step = (grid.back() - grid.front()) / static_cast<double>(grid.size() - 1);
  if (!(step > 0.0)) throw GridError("time grid must be strictly increasing");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (std::abs(grid[i] - grid[i - 1] - step) > 1e-9 * step) {
      throw GridError("synthesis needs a uniform time grid");
    }
  }
  return step;
}

}  // namespace

std::string_view to_string(Picture picture) {
  switch (picture) {
    case Picture::reference: return "reference";
    case Picture::total: return "total";
    case Picture::rotated: return "rotated";
  }
  return "?";
}

Picture parse_picture(std::string_view name) {
  if (name == "reference") return Picture::reference;
  if (name == "total") return Picture::total;
  if (name == "rotated") return Picture::rotated;
  throw ValidationError("unknown picture '" + std::string(name) + "'");
}

DriveSchedule::DriveSchedule(const DotParams& params)
    : params_(params),
      reduced_(reduce(params)),
      alpha_left_(left_pulse(params, params.A0_alpha)),
      alpha_right_(right_pulse(params, params.A0_alpha)),
      beta_left_(left_pulse(params, params.A0_beta)),
      beta_right_(right_pulse(params, params.A0_beta)) {}

ReferenceCoefficients DriveSchedule::reference(double t) const {
  ReferenceCoefficients c;
  c.Y = -(alpha_left_.value(t) - alpha_right_.value(t));
  c.dY = -(alpha_left_.rate(t) - alpha_right_.rate(t));
  c.ddY = -(alpha_left_.curvature(t) - alpha_right_.curvature(t));
  c.Z = reduced_.Z0 + beta_left_.value(t) + beta_right_.value(t);
  c.dZ = beta_left_.rate(t) + beta_right_.rate(t);
  c.ddZ = beta_left_.curvature(t) + beta_right_.curvature(t);
  return c;
}

CoefficientFrame DriveSchedule::frame(Picture picture, double t) const {
  if (picture == Picture::rotated) {
    throw PictureMismatchError("rotated frames are built from a whole trace (rotated_picture)");
  }
  const auto c = reference(t);
  CoefficientFrame f;
  f.picture = picture;
  f.t = t;
  f.Y = c.Y;
  f.Z = c.Z;
  f.dY = c.dY;
  f.dZ = c.dZ;
  if (picture == Picture::total) {
    f.X = counterdiabatic_coefficient(c.Y, c.Z, c.dY, c.dZ);
    f.dX = counterdiabatic_rate(c);
  }
  return f;
}

std::vector<CoefficientFrame> DriveSchedule::frames(Picture picture,
                                                    std::span<const double> grid) const {
  std::vector<CoefficientFrame> out;
  out.reserve(grid.size());
  for (double t : grid) out.push_back(frame(picture, t));
  return out;
}

double adiabaticity_metric(double Y, double Z, double dY, double dZ) {
  const double gap2 = gap_squared_checked(Y, Z);
  return std::abs(Z * dY - Y * dZ) / (gap2 * std::sqrt(gap2));
}

double counterdiabatic_coefficient(double Y, double Z, double dY, double dZ) {
  const double gap2 = gap_squared_checked(Y, Z);
  return (Z * dY - Y * dZ) / gap2;
}

double counterdiabatic_rate(const ReferenceCoefficients& c) {
  const double gap2 = gap_squared_checked(c.Y, c.Z);
  const double num = c.Z * c.dY - c.Y * c.dZ;
  const double dnum = c.Z * c.ddY - c.Y * c.ddZ;
  const double dgap2 = 2.0 * (c.Y * c.dY + c.Z * c.dZ);
  return (dnum * gap2 - num * dgap2) / (gap2 * gap2);
}

CdFieldTrace cd_field_synthesis(const DriveSchedule& schedule, std::span<const double> grid) {
  const double step = uniform_step(grid);
  CdFieldTrace out;
  out.grid.assign(grid.begin(), grid.end());
  out.vD.reserve(grid.size());
  for (double t : grid) {
    const auto c = schedule.reference(t);
    // Reduced units make the y-potential difference equal to X itself.
    out.vD.push_back(counterdiabatic_coefficient(c.Y, c.Z, c.dY, c.dZ));
  }
  out.epsD = numerics::differentiate(out.vD, step);
  for (double& e : out.epsD) e = -e;
  return out;
}

CoefficientFrame RotatedTrace::frame(std::size_t i) const {
  CoefficientFrame f;
  f.picture = Picture::rotated;
  f.t = grid.at(i);
  f.Y = Q.at(i);
  f.Z = Ztilde.at(i);
  return f;
}

RotatedTrace rotated_picture(std::span<const CoefficientFrame> total_frames, double Z0,
                             double eps_reg) {
  const std::size_t n = total_frames.size();
  if (n < 2) throw GridError("rotated picture needs at least 2 frames");
  RotatedTrace out;
  out.Z0 = Z0;
  out.grid.resize(n);
  out.phi.resize(n);
  out.dphi.resize(n);
  out.Q.resize(n);
  out.Ztilde.resize(n);

  std::vector<double> q2(n);
  double q2_max = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& f = total_frames[i];
    if (f.picture == Picture::rotated) {
      throw PictureMismatchError("rotated_picture expects total-picture frames");
    }
    out.grid[i] = f.t;
    q2[i] = f.X * f.X + f.Y * f.Y;
    q2_max = std::max(q2_max, q2[i]);
    out.Q[i] = std::sqrt(q2[i]);
    out.phi[i] = std::atan2(f.Y, f.X);
  }

  // Unwrap so consecutive samples differ by at most π.
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double offset = 0.0;
  double previous_raw = out.phi[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double raw = out.phi[i];
    const double jump = raw - previous_raw;
    if (jump > std::numbers::pi) offset -= two_pi;
    if (jump < -std::numbers::pi) offset += two_pi;
    previous_raw = raw;
    out.phi[i] = raw + offset;
  }

  const double threshold = eps_reg * q2_max;
  std::vector<bool> resolved(n, false);
  bool any_resolved = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (q2[i] > 0.0 && q2[i] >= threshold) {
      const auto& f = total_frames[i];
      out.dphi[i] = (f.dY * f.X - f.Y * f.dX) / q2[i];
      resolved[i] = true;
      any_resolved = true;
    }
  }
  if (!any_resolved) {
    std::fill(out.dphi.begin(), out.dphi.end(), 0.0);
  } else {
    // Nearest resolved neighbour by index; ties go to the earlier sample.
    constexpr auto none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> prev(n, none), next(n, none);
    for (std::size_t i = 0, last = none; i < n; ++i) {
      if (resolved[i]) last = i;
      prev[i] = last;
    }
    for (std::size_t i = n, last = none; i-- > 0;) {
      if (resolved[i]) last = i;
      next[i] = last;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (resolved[i]) continue;
      std::size_t src = prev[i];
      if (src == none || (next[i] != none && next[i] - i < i - src)) src = next[i];
      out.dphi[i] = out.dphi[src];
    }
  }

  for (std::size_t i = 0; i < n; ++i) out.Ztilde[i] = total_frames[i].Z + out.dphi[i];
  return out;
}

double XOnlyFields::max_field() const {
  double m = 0.0;
  for (double e : epsL) m = std::max(m, std::abs(e));
  for (double e : epsR) m = std::max(m, std::abs(e));
  return m;
}

XOnlyFields synthesize_x_only_fields(const RotatedTrace& rotated, const DotParams& params) {
  const double step = uniform_step(rotated.grid);
  const std::size_t n = rotated.grid.size();

  const bool needs_beta = std::any_of(rotated.Q.begin(), rotated.Q.end(),
                                      [](double q) { return q != 0.0; }) ||
                          std::any_of(rotated.Ztilde.begin(), rotated.Ztilde.end(),
                                      [&](double z) { return z != rotated.Z0; });
  if (needs_beta && params.A0_beta == 0.0) {
    throw ValidationError("x-only synthesis needs a nonzero Dresselhaus amplitude A0_beta");
  }
  double ratio = 0.0;  // A0_beta / A0_alpha
  if (params.A0_alpha != 0.0) {
    ratio = params.A0_beta / params.A0_alpha;
  } else if (std::any_of(rotated.Q.begin(), rotated.Q.end(), [](double q) { return q != 0.0; })) {
    throw ValidationError("x-only synthesis needs a nonzero Rashba amplitude A0_alpha");
  }

  XOnlyFields out;
  out.grid = rotated.grid;
  out.uL.resize(n);
  out.uR.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Q plays the role of Y = -(A0_alpha/A0_beta)(uL - uR), Z̃ - Z0 that of uL + uR.
    const double sum = rotated.Ztilde[i] - rotated.Z0;
    const double diff = -rotated.Q[i] * ratio;
    out.uL[i] = 0.5 * (sum + diff);
    out.uR[i] = 0.5 * (sum - diff);
  }
  out.epsL = numerics::differentiate(out.uL, step);
  out.epsR = numerics::differentiate(out.uR, step);
  for (double& e : out.epsL) e = -e;
  for (double& e : out.epsR) e = -e;
  return out;
}

HamiltonianMatrix matrix(Picture picture, const CoefficientFrame& frame) {
  if (frame.picture != picture) {
    throw PictureMismatchError("frame belongs to the " + std::string(to_string(frame.picture)) +
                               " picture, not " + std::string(to_string(picture)));
  }
  if (picture != Picture::total && frame.X != 0.0) {
    throw PictureMismatchError(std::string(to_string(picture)) + " frames have no sigma_x term");
  }
  using namespace std::complex_literals;
  const double half_hbar = 0.5 * units::kHbar;
  HamiltonianMatrix h;
  h(0, 0) = half_hbar * frame.Z;
  h(1, 1) = -half_hbar * frame.Z;
  h(0, 1) = half_hbar * (frame.X + 1i * frame.Y);
  h(1, 0) = half_hbar * (frame.X - 1i * frame.Y);
  return h;
}

}  // namespace cdspin
