#include "mubsort/sorter.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "mubsort/error.hpp"

namespace mubsort {

namespace {

constexpr int kCoarseSamples = 400;
constexpr double kGoldenRelTol = 1e-7;

struct Bracket {
  double lo;
  double hi;
};

// Shrinks [lo, hi] around a maximum of a unimodal f until narrower than tol.
Bracket golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    }
  }
  return {lo, hi};
}

// d/dz of ρ_i |R_i|² has the sign of Re(conj(R_i) (M E)_i).
double matched_slope(const ExactPropagator& propagator, const ModeAmplitudes& initial, int state, double z) {
  const ModeAmplitudes e = propagator.apply(initial, z);
  const ModeAmplitudes de = propagator.matrix().entries * e;
  return std::real(std::conj(e(state)) * de(state));
}

std::array<StateVector, 3> recorded_states(const MubTable& mubs, int mub) {
  return {mubs.state(mub, 0), mubs.state(mub, 1), mubs.state(mub, 2)};
}

}  // namespace

HologramSpec build_sorter(const SorterConfig& config, const MubTable& mubs) {
  if (mubs.dim() != 3) throw UnsupportedDimension("the sorter is built for a 3-dimensional Hilbert space");
  if (config.mub_index < 1 || config.mub_index > mubs.basis_count()) {
    throw InvalidSpec("mub_index must be in 1.." + std::to_string(mubs.basis_count()));
  }
  const ModeSet modes = make_modes(config.reference_tilts, config.signal_tilts, config.optical);
  std::array<std::array<Complex, 3>, 3> coefficients{};
  for (int i = 0; i < 3; ++i) {
    const auto c = mubs.coefficients(config.mub_index, i);
    std::copy(c.begin(), c.end(), coefficients[static_cast<std::size_t>(i)].begin());
  }
  HologramSpec spec = make_hologram(config.optical, modes, recorded_states(mubs, config.mub_index), coefficients,
                                    config.degenerate_kz);
  spec.mub_index = config.mub_index;
  return spec;
}

double analytic_zmax(const OpticalConfig& config) {
  return std::numbers::pi * beta(config) / (2.0 * std::numbers::sqrt3 * kappa2(config));
}

double matched_efficiency(const ExactPropagator& propagator, const HologramSpec& spec, int state, double z) {
  const auto e0 = initial_amplitudes(spec.gratings[static_cast<std::size_t>(state)].recorded_state);
  return probabilities(propagator.apply(e0, z), propagator.matrix())[static_cast<std::size_t>(state)];
}

ZmaxResult find_zmax(const HologramSpec& spec) {
  const ExactPropagator propagator(build_coupling_matrix(spec));
  const double z_scale = analytic_zmax(spec.config);
  if (!std::isfinite(z_scale) || !(z_scale > 0.0)) {
    throw NumericalError("no coupling (delta_n = 0): maximum efficiency depth is undefined");
  }
  const double scan_end = 2.0 * z_scale;
  const double dz = scan_end / kCoarseSamples;

  ZmaxResult out;
  for (int state = 0; state < 3; ++state) {
    const auto f = [&](double z) { return matched_efficiency(propagator, spec, state, z); };
    int best = 1;
    double best_value = f(dz);
    for (int k = 2; k <= kCoarseSamples; ++k) {
      const double v = f(k * dz);
      if (v > best_value) {
        best = k;
        best_value = v;
      }
    }
    if (best == kCoarseSamples || !(best_value > 0.0)) {
      throw NumericalError("matched state " + std::to_string(state + 1) + " has no interior efficiency maximum in (0, " +
                           std::to_string(scan_end * 1e3) + " mm]");
    }
    const auto bracket = golden_section_max(f, (best - 1) * dz, (best + 1) * dz, kGoldenRelTol * z_scale);
    const double width = bracket.hi - bracket.lo;
    double z_best = 0.5 * (bracket.lo + bracket.hi);

    // Near the peak f is flat to rounding; bisect on the slope sign instead.
    const auto e0 = initial_amplitudes(spec.gratings[static_cast<std::size_t>(state)].recorded_state);
    double lo = std::max(bracket.lo - width, 0.0);
    double hi = bracket.hi + width;
    if (matched_slope(propagator, e0, state, lo) > 0.0 && matched_slope(propagator, e0, state, hi) < 0.0) {
      for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (matched_slope(propagator, e0, state, mid) > 0.0 ? lo : hi) = mid;
      }
      z_best = 0.5 * (lo + hi);
    }
    out.per_state[static_cast<std::size_t>(state)] = z_best;
  }

  const auto [lo_it, hi_it] = std::minmax_element(out.per_state.begin(), out.per_state.end());
  const auto worst = [&](double z) {
    double m = 1.0;
    for (int s = 0; s < 3; ++s) m = std::min(m, matched_efficiency(propagator, spec, s, z));
    return m;
  };
  if (*hi_it - *lo_it > 1e-12 * *hi_it) {
    const auto bracket = golden_section_max(worst, *lo_it, *hi_it, 1e-12 * *hi_it);
    out.common = 0.5 * (bracket.lo + bracket.hi);
  } else {
    out.common = *lo_it;
  }
  for (int s = 0; s < 3; ++s) {
    out.efficiency_at_common[static_cast<std::size_t>(s)] = matched_efficiency(propagator, spec, s, out.common);
  }
  return out;
}

CrosstalkTable crosstalk_table(const HologramSpec& spec, const MubTable& mubs, double z, bool reference_ones) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw InvalidSpec("evaluation depth must be finite and non-negative");
  if (mubs.dim() != 3) throw UnsupportedDimension("crosstalk tables need a 3-dimensional MUB table");
  const ExactPropagator propagator(build_coupling_matrix(spec));
  const Matrix6c transfer = propagator.transfer(z);

  CrosstalkTable table;
  table.sorter_mub = spec.mub_index;
  table.z_eval = z;
  for (int mub = 1; mub <= mubs.basis_count(); ++mub) {
    for (int k = 0; k < 3; ++k) {
      const ModeAmplitudes e = transfer * initial_amplitudes(mubs.state(mub, k), reference_ones);
      const auto p = probabilities(e, propagator.matrix());
      table.rows.push_back({mubs.label(mub, k), mub, k, {p[0], p[1], p[2]}, p[3] + p[4] + p[5]});
    }
  }
  return table;
}

CrosstalkTable ideal_crosstalk_table(const MubTable& mubs, int sorter_mub) {
  if (mubs.dim() != 3) throw UnsupportedDimension("crosstalk tables need a 3-dimensional MUB table");
  const Projector projector = make_projector(mubs, sorter_mub);
  CrosstalkTable table;
  table.sorter_mub = sorter_mub;
  for (int mub = 1; mub <= mubs.basis_count(); ++mub) {
    for (int k = 0; k < 3; ++k) {
      const auto amps = apply_projector(projector, mubs.state(mub, k));
      CrosstalkRow row{mubs.label(mub, k), mub, k, {}, 0.0};
      double total = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        row.reference[i] = std::norm(amps[i]);
        total += row.reference[i];
      }
      row.residual = std::max(0.0, 1.0 - total);
      table.rows.push_back(row);
    }
  }
  return table;
}

std::vector<Figure2Panel> figure2_dataset(const HologramSpec& spec, const MubTable& mubs, double z_stop,
                                          int samples, bool reference_ones) {
  if (samples < 2) throw InvalidSpec("figure2 needs at least 2 samples");
  if (!(z_stop > 0.0) || !std::isfinite(z_stop)) throw InvalidSpec("z_stop must be positive");
  const ExactPropagator propagator(build_coupling_matrix(spec));

  std::vector<double> grid(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) grid[static_cast<std::size_t>(k)] = z_stop * k / (samples - 1);
  std::vector<Matrix6c> transfers;
  transfers.reserve(grid.size());
  for (double z : grid) transfers.push_back(propagator.transfer(z));

  std::vector<Figure2Panel> panels;
  for (int mub = 1; mub <= mubs.basis_count(); ++mub) {
    for (int k = 0; k < 3; ++k) {
      Figure2Panel panel{mubs.label(mub, k), mub, k, {}};
      const ModeAmplitudes e0 = initial_amplitudes(mubs.state(mub, k), reference_ones);
      for (std::size_t n = 0; n < grid.size(); ++n) {
        const ModeAmplitudes e = transfers[n] * e0;
        panel.trajectory.z.push_back(grid[n]);
        panel.trajectory.amplitudes.push_back(e);
        panel.trajectory.probabilities.push_back(probabilities(e, propagator.matrix()));
      }
      panels.push_back(std::move(panel));
    }
  }
  return panels;
}

Complex reconstruct_field(const HologramSpec& spec, const ModeAmplitudes& amps, double x, double z) {
  Complex field{};
  for (int k = 0; k < 6; ++k) {
    const auto& m = spec.modes[static_cast<std::size_t>(k)];
    field += amps(k) * std::polar(1.0, m.kx * x + m.kz * z);
  }
  return field;
}

}  // namespace mubsort
