#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace mubsort {

struct Material {
  double n0 = 1.4865;      ///< bulk index
  double delta_n = 0.0005; ///< index modulation depth
};

/// All lengths in metres.
struct OpticalConfig {
  Material material;
  double lambda = 1085e-9;
  double aperture_d = 0.01;
  double emulsion_l = 0.01;

  /// Throws InvalidSpec on non-physical values.
  void validate() const;
  /// Soft violations (coupled-mode validity regime); empty when none.
  std::vector<std::string> warnings() const;
};

/// In-medium wavenumber 2π n0 / λ.
double beta(const OpticalConfig& config);

/// One wave of tilt across the aperture, 2π / D.
double tilt_wavenumber(const OpticalConfig& config);

struct FourMomentum {
  double pt = 0.0;
  double px = 0.0;
  double py = 0.0;
  double pz = 0.0;
};

/// Momentum (units of ħ rad/m, c = 1) of a planewave with `tilt_waves` waves of
/// tilt. Throws EvanescentMode when the transverse wavenumber reaches β.
FourMomentum four_momentum(double tilt_waves, const OpticalConfig& config);

/// Mode ordering used throughout the coupled-mode system.
enum class ModeLabel { r1 = 0, r2, r3, a, b, c };

std::string_view to_string(ModeLabel label);

struct PlaneWaveMode {
  ModeLabel label = ModeLabel::r1;
  double tilt_waves = 0.0;
  double kx = 0.0;
  double kz = 0.0;
};

using ModeSet = std::array<PlaneWaveMode, 6>;

/// Builds (r1, r2, r3, a, b, c). The kz of the first three are the reference
/// z-wavenumbers ρ_i, the last three the signal z-wavenumbers σ_j.
/// Throws DegenerateGeometry on repeated tilts and EvanescentMode on
/// non-propagating ones.
ModeSet make_modes(const std::array<double, 3>& reference_tilts, const std::array<double, 3>& signal_tilts,
                   const OpticalConfig& config);

/// Warns when the smallest reference tilt is under 10x the largest signal tilt.
std::vector<std::string> geometry_warnings(const std::array<double, 3>& reference_tilts,
                                           const std::array<double, 3>& signal_tilts);

}  // namespace mubsort
