#pragma once

#include <array>
#include <vector>

#include "mubsort/hologram.hpp"

namespace mubsort {

/// Amplitudes in the order (R1, R2, R3, S_a, S_b, S_c).
using ModeAmplitudes = Vector6c;
using Probabilities = std::array<double, 6>;

struct Trajectory {
  std::vector<double> z;
  std::vector<ModeAmplitudes> amplitudes;
  std::vector<Probabilities> probabilities;
};

/// R = 0 and S = input. With `reference_ones` the reference amplitudes start at
/// (1, 1, 1) instead; this reproduces the literal printed initial condition and
/// is not a readout configuration.
ModeAmplitudes initial_amplitudes(const StateVector& input, bool reference_ones = false);

/// Σ ρ_i |R_i|² + Σ σ_j |S_j|².
double flux(const ModeAmplitudes& amps, const std::array<double, 3>& rho, const std::array<double, 3>& sigma);
double flux(const ModeAmplitudes& amps, const CouplingMatrix& matrix);

/// Flux-weighted share of each mode. Throws NumericalError on zero flux.
Probabilities probabilities(const ModeAmplitudes& amps, const std::array<double, 3>& rho,
                            const std::array<double, 3>& sigma);
Probabilities probabilities(const ModeAmplitudes& amps, const CouplingMatrix& matrix);

/// exp(M z) for a fixed coupling matrix, evaluated at arbitrary depth.
///
/// With D = diag(ρ, σ) the similarity transform D^{1/2} M D^{-1/2} is
/// anti-Hermitian, so it is diagonalized once by a unitary eigenbasis and
/// every exp(M z) afterwards costs one 6x6 product. If any flux weight is not
/// strictly positive the transform does not exist and a scaling-and-squaring
/// Taylor series is used for each z instead.
class ExactPropagator {
 public:
  explicit ExactPropagator(const CouplingMatrix& matrix);

  Matrix6c transfer(double z) const;
  /// D^{1/2} exp(M z) D^{-1/2}; unitary for a legal matrix.
  Matrix6c flux_unitary(double z) const;
  ModeAmplitudes apply(const ModeAmplitudes& initial, double z) const;

  const CouplingMatrix& matrix() const { return matrix_; }
  bool uses_eigenbasis() const { return hermitian_; }
  /// Largest |eigenvalue| of the Hermitian form (the fastest Rabi rate).
  double spectral_radius() const { return spectral_radius_; }

 private:
  CouplingMatrix matrix_;
  bool hermitian_ = false;
  Matrix6c eigenvectors_ = Matrix6c::Identity();
  Vector6d eigenvalues_ = Vector6d::Zero();
  Vector6d sqrt_weights_ = Vector6d::Ones();
  double spectral_radius_ = 0.0;
};

/// exp(A z) by scaling and squaring of a truncated Taylor series.
Matrix6c expm_series(const Matrix6c& a, double z);

ModeAmplitudes propagate_expm(const CouplingMatrix& matrix, const ModeAmplitudes& initial, double z);

/// Classical fixed-step RK4 from 0 to z. The step is shrunk so an integer
/// number of steps lands exactly on z; when step > z a single step is taken.
/// Samples are recorded at z = 0 and after every step.
Trajectory propagate_rk4(const CouplingMatrix& matrix, const ModeAmplitudes& initial, double z, double step);

/// 0.005 / (fastest Rabi rate of the system), about 300 RK4 steps per
/// quarter Rabi cycle. Infinite when the matrix is zero.
double recommended_step(const CouplingMatrix& matrix);

/// D^{-1} M† D. Propagating with it undoes propagation with M.
CouplingMatrix flux_adjoint(const CouplingMatrix& matrix);

}  // namespace mubsort
