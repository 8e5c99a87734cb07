#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace mubsort {

using Complex = std::complex<double>;

/// exp(i 2π power / d). The phase is reduced modulo d before evaluation so
/// large powers do not lose accuracy.
Complex omega(int d, long long power);

/// Normalized pure state over the planewave basis {|a>, |b>, |c>, ...}.
class StateVector {
 public:
  /// Normalizes `amps`. Throws InvalidDimension on an empty or zero vector.
  static StateVector normalized(std::vector<Complex> amps);
  /// Computational basis ket |index> in dimension `dim`.
  static StateVector basis(int dim, int index);

  int dim() const { return static_cast<int>(amps_.size()); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](int k) const { return amps_[static_cast<std::size_t>(k)]; }
  double norm_squared() const;

 private:
  explicit StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {}
  std::vector<Complex> amps_;
};

/// Σ conj(u_j) v_j.
Complex inner(const StateVector& u, const StateVector& v);

/// The d+1 mutually unbiased bases of an odd-prime dimension. Bases are
/// numbered 1..d+1 (basis 1 is the computational basis) and states 0..d-1.
class MubTable {
 public:
  int dim() const { return dim_; }
  int basis_count() const { return dim_ + 1; }

  const StateVector& state(int mub, int index) const;
  /// Unnormalized integer-phase coefficients (modulus 1 on every nonzero
  /// entry), i.e. the state before the 1/√d factor is applied.
  std::span<const Complex> coefficients(int mub, int index) const;
  /// "a1", "b1", ..., "c4" for d = 3.
  std::string label(int mub, int index) const;

 private:
  friend MubTable build_mub_table(int d);
  struct Entry {
    std::vector<Complex> coefficients;
    StateVector state;
  };
  const Entry& entry(int mub, int index) const;

  int dim_ = 0;
  std::vector<std::vector<Entry>> bases_;
};

/// d = 3 reproduces the four-basis table with cube-root-of-unity phases
/// exactly; any other odd prime uses the quadratic-phase construction
/// ω^(j k² + m k). Even or composite d throws UnsupportedDimension.
MubTable build_mub_table(int d = 3);

/// Σ_i |r_i><recorded_i| over one full basis of the table.
struct Projector {
  int mub_index = 0;
  std::vector<StateVector> recorded;
  std::vector<std::string> reference_labels;
};

Projector make_projector(const MubTable& table, int mub_index);

/// Amplitudes <r_i|P|input> = <recorded_i|input>.
std::vector<Complex> apply_projector(const Projector& p, const StateVector& input);

}  // namespace mubsort
