#pragma once

#include <array>
#include <cstdint>
#include <json.hpp>
#include <string>

#include "mubsort/error.hpp"
#include "mubsort/sorter.hpp"

namespace mubsort::cli {

/// Malformed or out-of-range configuration (exit code 2).
class ConfigError : public InvalidSpec {
 public:
  using InvalidSpec::InvalidSpec;
};

/// Flat run configuration in human-scale units. Converted to SI exactly once,
/// by sorter_config().
struct RunConfig {
  double n0 = 1.4865;
  double delta_n = 0.0005;
  double lambda_nm = 1085.0;
  double aperture_mm = 10.0;
  double emulsion_mm = 10.0;
  int mub_index = 4;
  std::array<double, 3> reference_tilts{2000.0, 3000.0, 4000.0};
  std::array<double, 3> signal_tilts{1.0, 2.0, 3.0};
  bool degenerate_kz = false;
  double rk4_step_um = 10.0;
  std::uint64_t seed = 1;
  bool initial_reference_amps = false;

  SorterConfig sorter_config() const;
  /// Throws ConfigError when any field violates a library precondition.
  void validate() const;
};

/// Starts from the defaults and applies the keys present in `j`. Unknown keys
/// and wrongly typed values throw ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j, RunConfig base = {});
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

}  // namespace mubsort::cli
