#include "mubsort/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mubsort/error.hpp"

namespace mubsort {

void OpticalConfig::validate() const {
  const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!std::isfinite(material.n0) || material.n0 <= 1.0) {
    throw InvalidSpec("n0 must be a finite value greater than 1");
  }
  if (!std::isfinite(material.delta_n) || material.delta_n < 0.0) {
    throw InvalidSpec("delta_n must be finite and non-negative");
  }
  if (!finite_positive(lambda)) throw InvalidSpec("wavelength must be positive");
  if (!finite_positive(aperture_d)) throw InvalidSpec("aperture must be positive");
  if (!finite_positive(emulsion_l)) throw InvalidSpec("emulsion length must be positive");
}

std::vector<std::string> OpticalConfig::warnings() const {
  std::vector<std::string> out;
  const double ratio = material.delta_n / material.n0;
  if (ratio > 0.01) {
    std::ostringstream msg;
    msg << "delta_n/n0 = " << ratio << " exceeds 0.01; coupled-mode theory may be inaccurate";
    out.push_back(msg.str());
  }
  return out;
}

double beta(const OpticalConfig& config) {
  return 2.0 * std::numbers::pi * config.material.n0 / config.lambda;
}

double tilt_wavenumber(const OpticalConfig& config) { return 2.0 * std::numbers::pi / config.aperture_d; }

FourMomentum four_momentum(double tilt_waves, const OpticalConfig& config) {
  const double b = beta(config);
  const double px = tilt_waves * tilt_wavenumber(config);
  if (!std::isfinite(px) || std::abs(px) >= b) {
    std::ostringstream msg;
    msg << "tilt of " << tilt_waves << " waves is evanescent (|kx| >= beta)";
    throw EvanescentMode(msg.str());
  }
  // (β - px)(β + px) keeps pz accurate when px is small relative to β.
  const double pz = std::sqrt((b - px) * (b + px));
  return {b, px, 0.0, pz};
}

std::string_view to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::r1: return "r1";
    case ModeLabel::r2: return "r2";
    case ModeLabel::r3: return "r3";
    case ModeLabel::a: return "a";
    case ModeLabel::b: return "b";
    case ModeLabel::c: return "c";
  }
  return "?";
}

ModeSet make_modes(const std::array<double, 3>& reference_tilts, const std::array<double, 3>& signal_tilts,
                   const OpticalConfig& config) {
  config.validate();
  std::array<double, 6> tilts{};
  std::copy(reference_tilts.begin(), reference_tilts.end(), tilts.begin());
  std::copy(signal_tilts.begin(), signal_tilts.end(), tilts.begin() + 3);
  for (std::size_t i = 0; i < tilts.size(); ++i) {
    if (!std::isfinite(tilts[i])) throw DegenerateGeometry("tilts must be finite");
    for (std::size_t j = i + 1; j < tilts.size(); ++j) {
      if (tilts[i] == tilts[j]) {
        std::ostringstream msg;
        msg << "modes " << to_string(static_cast<ModeLabel>(i)) << " and " << to_string(static_cast<ModeLabel>(j))
            << " share the tilt " << tilts[i];
        throw DegenerateGeometry(msg.str());
      }
    }
  }
  ModeSet modes{};
  for (std::size_t i = 0; i < tilts.size(); ++i) {
    const auto p = four_momentum(tilts[i], config);
    modes[i] = {static_cast<ModeLabel>(i), tilts[i], p.px, p.pz};
  }
  return modes;
}

std::vector<std::string> geometry_warnings(const std::array<double, 3>& reference_tilts,
                                           const std::array<double, 3>& signal_tilts) {
  std::vector<std::string> out;
  double min_ref = std::abs(reference_tilts[0]);
  double max_sig = 0.0;
  for (double r : reference_tilts) min_ref = std::min(min_ref, std::abs(r));
  for (double s : signal_tilts) max_sig = std::max(max_sig, std::abs(s));
  if (min_ref < 10.0 * max_sig) {
    std::ostringstream msg;
    msg << "smallest reference tilt (" << min_ref << ") is less than 10x the largest signal tilt (" << max_sig
        << ")";
    out.push_back(msg.str());
  }
  return out;
}

}  // namespace mubsort
