#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cdspin/config.hpp"
#include "cdspin/pulses.hpp"

namespace cdspin {

enum class Picture { reference, total, rotated };

std::string_view to_string(Picture picture);
/// Throws ValidationError for anything but reference|total|rotated.
Picture parse_picture(std::string_view name);

/// (X, Y, Z) with first derivatives, rad/ns and rad/ns². The Hamiltonian of
/// the frame is (ħ/2)[[Z, X + iY], [X - iY, -Z]].
///
/// In the rotated picture the σx coefficient is zero by construction, Y holds Q
/// and Z holds Z̃ = Z + φ̇.
struct CoefficientFrame {
  Picture picture = Picture::reference;
  double t = 0.0;
  double X = 0.0, Y = 0.0, Z = 0.0;
  double dX = 0.0, dY = 0.0, dZ = 0.0;
};

struct ReferenceCoefficients {
  double Y = 0.0, Z = 0.0;
  double dY = 0.0, dZ = 0.0;
  double ddY = 0.0, ddZ = 0.0;
};

/// Evaluates the drive of one parameter set at arbitrary times. Cheap to copy.
class DriveSchedule {
 public:
  explicit DriveSchedule(const DotParams& params);

  const DotParams& params() const { return params_; }
  const ReducedConstants& reduced() const { return reduced_; }

  /// Y = -(uL - uR) with the Rashba amplitude, Z = Z0 + uL + uR with the
  /// Dresselhaus amplitude; derivatives are analytic.
  ReferenceCoefficients reference(double t) const;

  /// Reference or total frame at t. The total frame carries the
  /// counter-diabatic X and its analytic rate. Rotated frames need a whole
  /// trace; asking for one here throws PictureMismatchError.
  CoefficientFrame frame(Picture picture, double t) const;

  std::vector<CoefficientFrame> frames(Picture picture, std::span<const double> grid) const;

 private:
  DotParams params_;
  ReducedConstants reduced_;
  PulseShape alpha_left_, alpha_right_;
  PulseShape beta_left_, beta_right_;
};

/// |Z dY - Y dZ| / (Y² + Z²)^{3/2}.
double adiabaticity_metric(double Y, double Z, double dY, double dZ);

/// Counter-diabatic σx coefficient X = (Z dY - Y dZ) / (Y² + Z²).
double counterdiabatic_coefficient(double Y, double Z, double dY, double dZ);

/// dX/dt from the second derivatives of Y and Z.
double counterdiabatic_rate(const ReferenceCoefficients& c);

/// y-potential difference driving X and its field eps^y_D = -dv_D/dt
/// (stencil derivative on the grid).
struct CdFieldTrace {
  std::vector<double> grid;
  std::vector<double> vD;
  std::vector<double> epsD;
};

CdFieldTrace cd_field_synthesis(const DriveSchedule& schedule, std::span<const double> grid);

/// z-rotated picture along a trace. phi is unwrapped, Ztilde = Z + dphi.
struct RotatedTrace {
  std::vector<double> grid;
  std::vector<double> phi, dphi, Q, Ztilde;
  // Static detuning, kept so fields and λ-scaling can separate the drive part.
  double Z0 = 0.0;

  CoefficientFrame frame(std::size_t i) const;
};

inline constexpr double kDefaultPhiRegularization = 1e-8;

/// Builds the rotated picture from total-picture frames on a uniform grid.
/// Where X² + Y² < eps_reg * max(X² + Y²) the angle rate is indeterminate and
/// is held at the nearest non-degenerate value.
RotatedTrace rotated_picture(std::span<const CoefficientFrame> total_frames, double Z0,
                             double eps_reg = kDefaultPhiRegularization);

/// x-only potentials/fields that realise the rotated picture. Potentials are
/// in the same Dresselhaus scaling as PulseTrace.
struct XOnlyFields {
  std::vector<double> grid;
  std::vector<double> uL, uR;
  std::vector<double> epsL, epsR;

  /// max(|eps_L|, |eps_R|) over the grid.
  double max_field() const;
};

XOnlyFields synthesize_x_only_fields(const RotatedTrace& rotated, const DotParams& params);

using HamiltonianMatrix = Eigen::Matrix2cd;

/// 2×2 matrix of the frame in units of ħ·rad/ns (ħ from config).
/// Throws PictureMismatchError when the frame does not belong to `picture`.
HamiltonianMatrix matrix(Picture picture, const CoefficientFrame& frame);

}  // namespace cdspin
