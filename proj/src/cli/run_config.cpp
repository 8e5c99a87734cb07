#include "mubsort/cli/run_config.hpp"

#include <fstream>

#include "mubsort/cli/report.hpp"

namespace mubsort::cli {

using nlohmann::json;

SorterConfig RunConfig::sorter_config() const {
  SorterConfig s;
  s.optical.material = {n0, delta_n};
  s.optical.lambda = lambda_nm * 1e-9;
  s.optical.aperture_d = aperture_mm * 1e-3;
  s.optical.emulsion_l = emulsion_mm * 1e-3;
  s.mub_index = mub_index;
  s.reference_tilts = reference_tilts;
  s.signal_tilts = signal_tilts;
  s.degenerate_kz = degenerate_kz;
  return s;
}

void RunConfig::validate() const {
  if (mub_index < 1 || mub_index > 4) throw ConfigError("mub_index must be in 1..4");
  if (!(rk4_step_um > 0.0) || !std::isfinite(rk4_step_um)) throw ConfigError("rk4_step_um must be positive");
  try {
    const SorterConfig s = sorter_config();
    s.optical.validate();
    make_modes(s.reference_tilts, s.signal_tilts, s.optical);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

void read_tilts(const json& j, const char* key, std::array<double, 3>& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_array() || it->size() != 3) throw ConfigError(std::string("config field '") + key + "' needs 3 numbers");
  for (std::size_t i = 0; i < 3; ++i) {
    if (!(*it)[i].is_number()) throw ConfigError(std::string("config field '") + key + "' needs 3 numbers");
    out[i] = (*it)[i].get<double>();
  }
}

}  // namespace

RunConfig run_config_from_json(const json& j, RunConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const char* const known[] = {"n0",           "delta_n",       "lambda_nm",     "aperture_mm",
                                      "emulsion_mm",  "mub_index",     "reference_tilts", "signal_tilts",
                                      "degenerate_kz", "rk4_step_um",  "seed",          "initial_reference_amps"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || item.key() == k;
    if (!ok) throw ConfigError("unknown config field '" + item.key() + "'");
  }
  for (const char* key : {"n0", "delta_n", "lambda_nm", "aperture_mm", "emulsion_mm", "rk4_step_um"}) {
    const auto it = j.find(key);
    if (it != j.end() && !it->is_number()) throw ConfigError(std::string("config field '") + key + "' must be a number");
  }
  for (const char* key : {"mub_index", "seed"}) {
    const auto it = j.find(key);
    if (it != j.end() && !it->is_number_integer()) {
      throw ConfigError(std::string("config field '") + key + "' must be an integer");
    }
  }
  if (const auto it = j.find("seed"); it != j.end() && it->is_number_integer() && !it->is_number_unsigned()) {
    throw ConfigError("config field 'seed' must be non-negative");
  }
  RunConfig c = base;
  read(j, "n0", c.n0);
  read(j, "delta_n", c.delta_n);
  read(j, "lambda_nm", c.lambda_nm);
  read(j, "aperture_mm", c.aperture_mm);
  read(j, "emulsion_mm", c.emulsion_mm);
  read(j, "mub_index", c.mub_index);
  read_tilts(j, "reference_tilts", c.reference_tilts);
  read_tilts(j, "signal_tilts", c.signal_tilts);
  read(j, "degenerate_kz", c.degenerate_kz);
  read(j, "rk4_step_um", c.rk4_step_um);
  read(j, "seed", c.seed);
  read(j, "initial_reference_amps", c.initial_reference_amps);
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

json to_json(const RunConfig& c) {
  const auto tilts = [](const std::array<double, 3>& t) {
    json a = json::array();
    for (double v : t) a.push_back(report::round_significant(v));
    return a;
  };
  return {{"n0", report::round_significant(c.n0)},
          {"delta_n", report::round_significant(c.delta_n)},
          {"lambda_nm", report::round_significant(c.lambda_nm)},
          {"aperture_mm", report::round_significant(c.aperture_mm)},
          {"emulsion_mm", report::round_significant(c.emulsion_mm)},
          {"mub_index", c.mub_index},
          {"reference_tilts", tilts(c.reference_tilts)},
          {"signal_tilts", tilts(c.signal_tilts)},
          {"degenerate_kz", c.degenerate_kz},
          {"rk4_step_um", report::round_significant(c.rk4_step_um)},
          {"seed", c.seed},
          {"initial_reference_amps", c.initial_reference_amps}};
}

}  // namespace mubsort::cli
