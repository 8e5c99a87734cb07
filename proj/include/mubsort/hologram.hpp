#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>

#include "mubsort/hilbert.hpp"
#include "mubsort/optics.hpp"

namespace mubsort {

using Matrix6c = Eigen::Matrix<Complex, 6, 6>;
using Vector6c = Eigen::Matrix<Complex, 6, 1>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

/// One of the three incoherently recorded gratings: the interference of
/// `recorded_state` with its reference planewave.
struct RecordedGrating {
  int index = 1;  ///< 1..3, selects r1..r3
  PlaneWaveMode reference;
  StateVector recorded_state = StateVector::basis(3, 0);
  /// Unit-modulus phase coefficients of the recorded state over (a, b, c),
  /// before normalization. These enter the coupling matrix.
  std::array<Complex, 3> coefficients{};
};

struct HologramSpec {
  std::array<RecordedGrating, 3> gratings;
  OpticalConfig config;
  ModeSet modes{};
  /// Basis the gratings were recorded from, 1..4; 0 for a custom state set.
  int mub_index = 0;
  /// Force ρ_i = σ_j = β in the coupled-mode matrix.
  bool degenerate_kz = false;

  /// Throws InvalidSpec when the recorded states are not an orthonormal set,
  /// when gratings do not address r1, r2, r3 in order, or when coefficients
  /// disagree with the recorded state.
  void validate() const;

  std::array<double, 3> rho() const;
  std::array<double, 3> sigma() const;
};

/// Assembles a spec from three recorded states. `coefficients` are taken from
/// the state itself by scaling the largest component to modulus 1.
HologramSpec make_hologram(const OpticalConfig& config, const ModeSet& modes,
                           const std::array<StateVector, 3>& recorded, bool degenerate_kz = false);
/// Same, with the unit-modulus coefficients supplied explicitly.
HologramSpec make_hologram(const OpticalConfig& config, const ModeSet& modes,
                           const std::array<StateVector, 3>& recorded,
                           const std::array<std::array<Complex, 3>, 3>& coefficients, bool degenerate_kz = false);

/// Coupled-mode system E' = M E in the order (R1, R2, R3, S_a, S_b, S_c).
struct CouplingMatrix {
  Matrix6c entries = Matrix6c::Zero();
  double kappa2 = 0.0;
  std::array<double, 3> rho{};
  std::array<double, 3> sigma{};

  /// diag(ρ1, ρ2, ρ3, σa, σb, σc).
  Vector6d flux_weights() const;
};

/// κ² = β² (Δn/n0) / (6(3+√3)).
double kappa2(const OpticalConfig& config);

/// 2 - |e^{i k_r·r} + Σ_j c̃_j e^{i k_j·r}|² with normalized amplitudes c̃_j.
double intensity_modulation(const RecordedGrating& grating, const std::array<PlaneWaveMode, 3>& signals, double x,
                            double z);
double intensity_modulation(const HologramSpec& spec, int grating_index, double x, double z);

/// n0 (1 + (Δn/n0) (I_R1 + I_R2 + I_R3) / (6(1+√3))).
double index_profile(const HologramSpec& spec, double x, double z);

/// entry(R_i, S_j) = iκ² conj(c_j^(i)) / ρ_i, entry(S_j, R_i) = iκ² c_j^(i) / σ_j,
/// zero diagonal blocks.
CouplingMatrix build_coupling_matrix(const HologramSpec& spec);

}  // namespace mubsort
