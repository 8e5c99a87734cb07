#pragma once

#include <cstdint>
#include <iosfwd>
#include <json.hpp>
#include <optional>
#include <string>

#include "mubsort/cli/run_config.hpp"

namespace mubsort::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

inline constexpr const char* kVersion = MUBSORT_VERSION;

/// Per-invocation options that are not part of the physical configuration.
struct CommandOptions {
  std::string out_dir = ".";
  std::optional<double> z_mm;  ///< crosstalk: evaluation depth; figure2: last depth
  int samples = 201;
  bool svg = false;
  bool rk4_trajectories = false;
  std::uint64_t monte_carlo = 0;
  std::string tables_path;
  std::string sweep_param = "delta_n";
  double sweep_from = 0.00025;
  double sweep_to = 0.001;
  int sweep_steps = 7;
};

/// crosstalk.csv + crosstalk.json at the common operating depth (or --z).
nlohmann::json cmd_crosstalk(const RunConfig& config, const CommandOptions& options);
/// figure2_<state>.csv per MUB state plus figure2_index.json.
nlohmann::json cmd_figure2(const RunConfig& config, const CommandOptions& options);
/// zmax.json.
nlohmann::json cmd_zmax(const RunConfig& config, const CommandOptions& options);
/// qkd.json, built from all four sorters at their own operating depths or
/// from the tables file given in options.tables_path.
nlohmann::json cmd_qkd(const RunConfig& config, const CommandOptions& options);
/// sweep.csv + sweep.json over one parameter.
nlohmann::json cmd_sweep(const RunConfig& config, const CommandOptions& options);

/// Entry point used by the executable. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mubsort::cli
