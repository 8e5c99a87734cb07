#include "mubsort/hologram.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mubsort/error.hpp"

namespace mubsort {

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;
constexpr double kOrthogonalityTol = 1e-9;

std::array<PlaneWaveMode, 3> signal_modes(const ModeSet& modes) { return {modes[3], modes[4], modes[5]}; }

}  // namespace

void HologramSpec::validate() const {
  config.validate();
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& g = gratings[i];
    if (g.index != static_cast<int>(i) + 1 || g.reference.label != static_cast<ModeLabel>(i)) {
      throw InvalidSpec("grating " + std::to_string(i + 1) + " must reference r" + std::to_string(i + 1));
    }
    if (g.recorded_state.dim() != 3) throw InvalidSpec("recorded states must be 3-dimensional");
    if (std::abs(g.recorded_state.norm_squared() - 1.0) > kOrthogonalityTol) {
      throw InvalidSpec("recorded state " + std::to_string(i + 1) + " is not normalized");
    }
    double coeff_norm = 0.0;
    Complex overlap{};
    for (int k = 0; k < 3; ++k) {
      coeff_norm += std::norm(g.coefficients[static_cast<std::size_t>(k)]);
      overlap += std::conj(g.coefficients[static_cast<std::size_t>(k)]) * g.recorded_state[k];
    }
    if (!(coeff_norm > 0.0) || std::abs(std::abs(overlap) / std::sqrt(coeff_norm) - 1.0) > kOrthogonalityTol) {
      throw InvalidSpec("coefficients of grating " + std::to_string(i + 1) + " do not match its recorded state");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (std::abs(inner(gratings[j].recorded_state, g.recorded_state)) > kOrthogonalityTol) {
        throw InvalidSpec("recorded states " + std::to_string(j + 1) + " and " + std::to_string(i + 1) +
                          " are not orthogonal");
      }
    }
  }
}

std::array<double, 3> HologramSpec::rho() const {
  const double b = beta(config);
  return degenerate_kz ? std::array<double, 3>{b, b, b} : std::array<double, 3>{modes[0].kz, modes[1].kz, modes[2].kz};
}

std::array<double, 3> HologramSpec::sigma() const {
  const double b = beta(config);
  return degenerate_kz ? std::array<double, 3>{b, b, b} : std::array<double, 3>{modes[3].kz, modes[4].kz, modes[5].kz};
}

HologramSpec make_hologram(const OpticalConfig& config, const ModeSet& modes,
                           const std::array<StateVector, 3>& recorded, bool degenerate_kz) {
  std::array<std::array<Complex, 3>, 3> coefficients{};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& s = recorded[i];
    if (s.dim() != 3) throw InvalidSpec("recorded states must be 3-dimensional");
    double largest = 0.0;
    for (int k = 0; k < 3; ++k) largest = std::max(largest, std::abs(s[k]));
    for (int k = 0; k < 3; ++k) coefficients[i][static_cast<std::size_t>(k)] = s[k] / largest;
  }
  return make_hologram(config, modes, recorded, coefficients, degenerate_kz);
}

HologramSpec make_hologram(const OpticalConfig& config, const ModeSet& modes,
                           const std::array<StateVector, 3>& recorded,
                           const std::array<std::array<Complex, 3>, 3>& coefficients, bool degenerate_kz) {
  HologramSpec spec;
  spec.config = config;
  spec.modes = modes;
  spec.degenerate_kz = degenerate_kz;
  for (std::size_t i = 0; i < 3; ++i) {
    auto& g = spec.gratings[i];
    g.index = static_cast<int>(i) + 1;
    g.reference = modes[i];
    g.recorded_state = recorded[i];
    g.coefficients = coefficients[i];
  }
  spec.validate();
  return spec;
}

Vector6d CouplingMatrix::flux_weights() const {
  Vector6d w;
  w << rho[0], rho[1], rho[2], sigma[0], sigma[1], sigma[2];
  return w;
}

double kappa2(const OpticalConfig& config) {
  const double b = beta(config);
  return b * b * (config.material.delta_n / config.material.n0) / (6.0 * (3.0 + kSqrt3));
}

double intensity_modulation(const RecordedGrating& grating, const std::array<PlaneWaveMode, 3>& signals, double x,
                            double z) {
  const auto phase = [x, z](const PlaneWaveMode& m) { return std::polar(1.0, m.kx * x + m.kz * z); };
  Complex field = phase(grating.reference);
  for (std::size_t j = 0; j < 3; ++j) field += grating.recorded_state[static_cast<int>(j)] * phase(signals[j]);
  return 2.0 - std::norm(field);
}

double intensity_modulation(const HologramSpec& spec, int grating_index, double x, double z) {
  if (grating_index < 1 || grating_index > 3) throw InvalidSpec("grating index must be 1..3");
  return intensity_modulation(spec.gratings[static_cast<std::size_t>(grating_index - 1)], signal_modes(spec.modes), x,
                              z);
}

double index_profile(const HologramSpec& spec, double x, double z) {
  const auto signals = signal_modes(spec.modes);
  double sum = 0.0;
  for (const auto& g : spec.gratings) sum += intensity_modulation(g, signals, x, z);
  const auto& m = spec.config.material;
  return m.n0 * (1.0 + (m.delta_n / m.n0) * sum / (6.0 * (1.0 + kSqrt3)));
}

CouplingMatrix build_coupling_matrix(const HologramSpec& spec) {
  spec.validate();
  CouplingMatrix out;
  out.kappa2 = kappa2(spec.config);
  out.rho = spec.rho();
  out.sigma = spec.sigma();
  const Complex ik2{0.0, out.kappa2};
  for (int i = 0; i < 3; ++i) {
    const auto& c = spec.gratings[static_cast<std::size_t>(i)].coefficients;
    for (int j = 0; j < 3; ++j) {
      const Complex cji = c[static_cast<std::size_t>(j)];
      out.entries(i, 3 + j) = ik2 * std::conj(cji) / out.rho[static_cast<std::size_t>(i)];
      out.entries(3 + j, i) = ik2 * cji / out.sigma[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

}  // namespace mubsort
