#include "mubsort/propagate.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mubsort/error.hpp"

namespace mubsort {

namespace {

void require_finite(const Matrix6c& m) {
  if (!m.allFinite()) throw NumericalError("coupling matrix has non-finite entries");
}

}  // namespace

ModeAmplitudes initial_amplitudes(const StateVector& input, bool reference_ones) {
  if (input.dim() != 3) throw DimensionMismatch("initial amplitudes need a 3-dimensional state");
  ModeAmplitudes e = ModeAmplitudes::Zero();
  if (reference_ones) e.head<3>().setOnes();
  for (int j = 0; j < 3; ++j) e(3 + j) = input[j];
  return e;
}

double flux(const ModeAmplitudes& amps, const std::array<double, 3>& rho, const std::array<double, 3>& sigma) {
  double f = 0.0;
  for (int i = 0; i < 3; ++i) {
    f += rho[static_cast<std::size_t>(i)] * std::norm(amps(i));
    f += sigma[static_cast<std::size_t>(i)] * std::norm(amps(3 + i));
  }
  return f;
}

double flux(const ModeAmplitudes& amps, const CouplingMatrix& matrix) {
  return flux(amps, matrix.rho, matrix.sigma);
}

Probabilities probabilities(const ModeAmplitudes& amps, const std::array<double, 3>& rho,
                            const std::array<double, 3>& sigma) {
  const double total = flux(amps, rho, sigma);
  if (!(total > 0.0) || !std::isfinite(total)) throw NumericalError("probabilities undefined for zero flux");
  Probabilities p{};
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = rho[i] * std::norm(amps(static_cast<int>(i))) / total;
    p[3 + i] = sigma[i] * std::norm(amps(static_cast<int>(3 + i))) / total;
  }
  return p;
}

Probabilities probabilities(const ModeAmplitudes& amps, const CouplingMatrix& matrix) {
  return probabilities(amps, matrix.rho, matrix.sigma);
}

ExactPropagator::ExactPropagator(const CouplingMatrix& matrix) : matrix_(matrix) {
  require_finite(matrix.entries);
  const Vector6d w = matrix.flux_weights();
  hermitian_ = (w.array() > 0.0).all() && w.allFinite();
  if (!hermitian_) {
    spectral_radius_ = matrix.entries.norm();
    return;
  }
  sqrt_weights_ = w.cwiseSqrt();
  // Hermitian H = -i D^{1/2} M D^{-1/2}; exp(M z) = D^{-1/2} V e^{iΛz} V† D^{1/2}.
  Matrix6c h = Complex{0.0, -1.0} * (sqrt_weights_.asDiagonal() * matrix.entries *
                                     sqrt_weights_.cwiseInverse().asDiagonal());
  h = (0.5 * (h + h.adjoint())).eval();
  Eigen::SelfAdjointEigenSolver<Matrix6c> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition of coupling matrix failed");
  eigenvectors_ = solver.eigenvectors();
  eigenvalues_ = solver.eigenvalues();
  spectral_radius_ = eigenvalues_.cwiseAbs().maxCoeff();
}

Matrix6c ExactPropagator::flux_unitary(double z) const {
  if (!hermitian_) {
    return sqrt_weights_.asDiagonal() * expm_series(matrix_.entries, z) * sqrt_weights_.cwiseInverse().asDiagonal();
  }
  Eigen::Matrix<Complex, 6, 1> phases;
  for (int k = 0; k < 6; ++k) phases(k) = std::polar(1.0, eigenvalues_(k) * z);
  return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Matrix6c ExactPropagator::transfer(double z) const {
  if (z == 0.0) return Matrix6c::Identity();
  if (!hermitian_) return expm_series(matrix_.entries, z);
  return sqrt_weights_.cwiseInverse().asDiagonal() * flux_unitary(z) * sqrt_weights_.asDiagonal();
}

ModeAmplitudes ExactPropagator::apply(const ModeAmplitudes& initial, double z) const {
  if (z < 0.0 || !std::isfinite(z)) throw InvalidSpec("propagation depth must be finite and non-negative");
  return transfer(z) * initial;
}

Matrix6c expm_series(const Matrix6c& a, double z) {
  require_finite(a);
  Matrix6c scaled = a * z;
  const double norm = scaled.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  scaled /= std::ldexp(1.0, squarings);
  // ||scaled|| <= 0.5, so 20 terms are far below double rounding.
  Matrix6c result = Matrix6c::Identity();
  Matrix6c term = Matrix6c::Identity();
  for (int k = 1; k <= 20; ++k) {
    term = (term * scaled / static_cast<double>(k)).eval();
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = (result * result).eval();
  return result;
}

ModeAmplitudes propagate_expm(const CouplingMatrix& matrix, const ModeAmplitudes& initial, double z) {
  return ExactPropagator(matrix).apply(initial, z);
}

Trajectory propagate_rk4(const CouplingMatrix& matrix, const ModeAmplitudes& initial, double z, double step) {
  require_finite(matrix.entries);
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidSpec("RK4 step must be positive");
  if (z < 0.0 || !std::isfinite(z)) throw InvalidSpec("propagation depth must be finite and non-negative");

  const auto steps = z > 0.0 ? static_cast<long long>(std::max(1.0, std::ceil(z / step * (1.0 - 1e-12)))) : 0LL;
  const double h = steps > 0 ? z / static_cast<double>(steps) : 0.0;
  const Matrix6c& m = matrix.entries;

  Trajectory out;
  out.z.reserve(static_cast<std::size_t>(steps + 1));
  out.amplitudes.reserve(static_cast<std::size_t>(steps + 1));
  out.probabilities.reserve(static_cast<std::size_t>(steps + 1));
  const bool has_flux = flux(initial, matrix) > 0.0;
  auto record = [&](double at, const ModeAmplitudes& e) {
    out.z.push_back(at);
    out.amplitudes.push_back(e);
    out.probabilities.push_back(has_flux ? probabilities(e, matrix) : Probabilities{});
  };

  ModeAmplitudes e = initial;
  record(0.0, e);
  for (long long n = 1; n <= steps; ++n) {
    const ModeAmplitudes k1 = m * e;
    const ModeAmplitudes k2 = m * (e + 0.5 * h * k1);
    const ModeAmplitudes k3 = m * (e + 0.5 * h * k2);
    const ModeAmplitudes k4 = m * (e + h * k3);
    e += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    record(n == steps ? z : static_cast<double>(n) * h, e);
  }
  return out;
}

double recommended_step(const CouplingMatrix& matrix) {
  const double rate = ExactPropagator(matrix).spectral_radius();
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  // ~314 steps per quarter Rabi cycle.
  return 0.005 / rate;
}

CouplingMatrix flux_adjoint(const CouplingMatrix& matrix) {
  CouplingMatrix out = matrix;
  const Vector6d w = matrix.flux_weights();
  out.entries = w.cwiseInverse().asDiagonal() * matrix.entries.adjoint() * w.asDiagonal();
  return out;
}

}  // namespace mubsort
