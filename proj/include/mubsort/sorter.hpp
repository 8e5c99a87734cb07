#pragma once

#include <array>
#include <string>
#include <vector>

#include "mubsort/hologram.hpp"
#include "mubsort/propagate.hpp"

namespace mubsort {

/// Geometry and basis selection for one MUB sorter. Defaults are the PTR
/// glass parameters with signal tilts (1, 2, 3) and reference tilts
/// (2000, 3000, 4000) waves across a 1 cm aperture.
struct SorterConfig {
  OpticalConfig optical;
  int mub_index = 4;
  std::array<double, 3> reference_tilts{2000.0, 3000.0, 4000.0};
  std::array<double, 3> signal_tilts{1.0, 2.0, 3.0};
  bool degenerate_kz = false;
};

/// Grating i records state i of basis `mub_index` against reference r_i.
HologramSpec build_sorter(const SorterConfig& config, const MubTable& mubs);

struct ZmaxResult {
  std::array<double, 3> per_state{};  ///< m
  double common = 0.0;                ///< m, maximizes the smallest matched efficiency
  std::array<double, 3> efficiency_at_common{};
};

/// π β / (2 √3 κ²): quarter Rabi period of the degenerate two-level system.
double analytic_zmax(const OpticalConfig& config);

/// Per-state optimum depths by coarse scan over (0, 2 analytic_zmax] followed
/// by golden-section refinement, then the max-min common depth. Throws
/// NumericalError when a matched curve has no interior maximum in the scan.
ZmaxResult find_zmax(const HologramSpec& spec);

/// Matched-state efficiency of grating `state` (0..2) at depth z.
double matched_efficiency(const ExactPropagator& propagator, const HologramSpec& spec, int state, double z);

struct CrosstalkRow {
  std::string label;
  int mub = 1;    ///< basis of the input state, 1..4
  int index = 0;  ///< state within that basis, 0..2
  std::array<double, 3> reference{};
  double residual = 0.0;  ///< probability left in the signal modes
};

struct CrosstalkTable {
  int sorter_mub = 4;
  double z_eval = 0.0;  ///< m
  std::vector<CrosstalkRow> rows;
};

/// One row per MUB state (basis-major, a/b/c within a basis), evaluated with
/// the exact propagator at depth z >= 0.
CrosstalkTable crosstalk_table(const HologramSpec& spec, const MubTable& mubs, double z,
                               bool reference_ones = false);

/// |<recorded_i|state>|² for every MUB state: the ideal projector's table.
CrosstalkTable ideal_crosstalk_table(const MubTable& mubs, int sorter_mub);

struct Figure2Panel {
  std::string label;
  int mub = 1;
  int index = 0;
  Trajectory trajectory;
};

/// Twelve trajectories on the uniform grid z_k = k z_stop / (samples - 1).
std::vector<Figure2Panel> figure2_dataset(const HologramSpec& spec, const MubTable& mubs, double z_stop,
                                          int samples, bool reference_ones = false);

/// E_y(x, z) = Σ_k amp_k exp(i (kx_k x + kz_k z)) over the six primary modes.
Complex reconstruct_field(const HologramSpec& spec, const ModeAmplitudes& amps, double x, double z);

}  // namespace mubsort
