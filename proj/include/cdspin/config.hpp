#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace cdspin {

namespace units {
// CODATA values; every other module takes ħ and μ_B from here.
inline constexpr double kHbar = 6.582120e-4;   // meV·ns
inline constexpr double kBohrMagneton = 5.7883818e-2;  // meV/T
}  // namespace units

/// Physical configuration of the double dot and the drive ansatz.
///
/// Energies in meV, field in tesla, times in ns. The spin-orbit couplings and
/// the bare vector-potential amplitude never appear separately; they are folded
/// into the two reduced amplitudes `A0_alpha` (Rashba, drives Y) and `A0_beta`
/// (Dresselhaus, drives Z), both in rad/ns.
struct DotParams {
  double J = 0.1;
  double g = -0.44;
  double B = 3.7;
  double A0_beta = 0.0;
  double A0_alpha = 0.0;
  double a_L = 0.54;
  double a_R = 0.48;
  double w_L = 0.1;
  double w_R = 0.1;
  double t_f = 11.0;

  /// Calibrated GaAs defaults: A0_beta = |Z0|/2 so the detuning sweeps from
  /// Z0 to -Z0, A0_alpha = 29 rad/ns.
  static DotParams defaults();

  DotParams with_tf(double t_f) const;

  bool operator==(const DotParams&) const = default;
};

struct ReducedConstants {
  double Delta = 0.0;  // Zeeman energy, meV
  double Z0 = 0.0;     // static detuning -(J + Δ)/ħ, rad/ns
  double hbar = units::kHbar;
  double muB = units::kBohrMagneton;
};

inline constexpr double kMaxTwoLevelRatio = 0.2;
inline constexpr double kDefaultA0Alpha = 29.0;

/// Δ = g μ_B B in meV.
double zeeman_splitting(double g, double B);

/// |J + Δ| / J, the smallness parameter of the singlet/lowest-triplet reduction.
double two_level_ratio(const DotParams& params);

/// Throws ValidationError on non-physical values or when the two-level
/// reduction is invalid (ratio > 0.2).
void validate(const DotParams& params);

/// Validates, then converts to angular-frequency units.
ReducedConstants reduce(const DotParams& params);

/// Names of all DotParams fields, in declaration order.
const std::vector<std::string_view>& param_names();

/// Sets one field by name. `A0_beta` also accepts "auto" (= |Z0|/2 of the
/// current J, g, B). Throws ValidationError on an unknown key or bad number.
void set_param(DotParams& params, std::string_view key, std::string_view value);

double get_param(const DotParams& params, std::string_view key);

/// Flat `key = value` text, `#` starts a comment. Every DotParams field must
/// appear exactly once; unknown keys are rejected.
DotParams parse_config(std::istream& in);
DotParams load_config(const std::filesystem::path& path);

/// Inverse of parse_config (17 significant digits).
std::string format_config(const DotParams& params);

}  // namespace cdspin
