#include "mubsort/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "mubsort/cli/report.hpp"

namespace mubsort::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  os << contents;
  if (!os) throw ConfigError("failed writing '" + path.string() + "'");
}

json header(const char* command, const RunConfig& config) {
  return {{"command", command}, {"version", kVersion}, {"config", to_json(config)}};
}

struct Sorter {
  HologramSpec spec;
  ZmaxResult zmax;
};

Sorter make_sorter(const RunConfig& config, const MubTable& mubs) {
  Sorter s{build_sorter(config.sorter_config(), mubs), {}};
  s.zmax = find_zmax(s.spec);
  return s;
}

std::array<double, 4> uniform_bases() { return {0.25, 0.25, 0.25, 0.25}; }

}  // namespace

json cmd_crosstalk(const RunConfig& config, const CommandOptions& options) {
  const auto dir = prepare_out_dir(options.out_dir);
  const MubTable mubs = build_mub_table(3);
  const Sorter sorter = make_sorter(config, mubs);
  const double z = options.z_mm ? *options.z_mm * 1e-3 : sorter.zmax.common;
  const CrosstalkTable table = crosstalk_table(sorter.spec, mubs, z, config.initial_reference_amps);

  std::ostringstream csv;
  report::write_crosstalk_csv(csv, table);
  write_file(dir / "crosstalk.csv", csv.str());

  json j = header("crosstalk", config);
  j["table"] = report::to_json(table);
  j["zmax"] = report::to_json(sorter.zmax);
  write_file(dir / "crosstalk.json", report::dump_json(j));
  return j;
}

json cmd_figure2(const RunConfig& config, const CommandOptions& options) {
  const auto dir = prepare_out_dir(options.out_dir);
  const MubTable mubs = build_mub_table(3);
  const Sorter sorter = make_sorter(config, mubs);
  const double z_stop = options.z_mm ? *options.z_mm * 1e-3 : config.emulsion_mm * 1e-3;
  const auto panels = figure2_dataset(sorter.spec, mubs, z_stop, options.samples, config.initial_reference_amps);
  const CouplingMatrix matrix = build_coupling_matrix(sorter.spec);

  json files = json::array();
  for (const auto& panel : panels) {
    json entry = {{"state", panel.label}, {"csv", "figure2_" + panel.label + ".csv"}};
    std::ostringstream csv;
    report::write_panel_csv(csv, panel);
    write_file(dir / entry["csv"].get<std::string>(), csv.str());
    if (options.svg) {
      entry["svg"] = "figure2_" + panel.label + ".svg";
      write_file(dir / entry["svg"].get<std::string>(), report::panel_svg(panel));
    }
    if (options.rk4_trajectories) {
      const auto e0 = initial_amplitudes(mubs.state(panel.mub, panel.index), config.initial_reference_amps);
      const Trajectory t = propagate_rk4(matrix, e0, z_stop, config.rk4_step_um * 1e-6);
      std::ostringstream traj;
      report::write_trajectory_csv(traj, t);
      entry["rk4_csv"] = "trajectory_" + panel.label + ".csv";
      write_file(dir / entry["rk4_csv"].get<std::string>(), traj.str());
    }
    files.push_back(std::move(entry));
  }

  json j = header("figure2", config);
  j["z_stop_mm"] = report::round_significant(z_stop * 1e3);
  j["samples"] = options.samples;
  j["zmax"] = report::to_json(sorter.zmax);
  j["panels"] = files;
  write_file(dir / "figure2_index.json", report::dump_json(j));
  return j;
}

json cmd_zmax(const RunConfig& config, const CommandOptions& options) {
  const auto dir = prepare_out_dir(options.out_dir);
  const MubTable mubs = build_mub_table(3);
  const Sorter sorter = make_sorter(config, mubs);
  json j = header("zmax", config);
  j.update(report::to_json(sorter.zmax));
  j["analytic_mm"] = report::round_significant(analytic_zmax(sorter.spec.config) * 1e3);
  write_file(dir / "zmax.json", report::dump_json(j));
  return j;
}

json cmd_qkd(const RunConfig& config, const CommandOptions& options) {
  const auto dir = prepare_out_dir(options.out_dir);
  std::array<CrosstalkTable, 4> tables;
  json j = header("qkd", config);

  if (!options.tables_path.empty()) {
    std::ifstream in(options.tables_path);
    if (!in) throw ConfigError("cannot open tables file '" + options.tables_path + "'");
    json doc;
    try {
      doc = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("tables file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.contains("tables") || !doc["tables"].is_array() || doc["tables"].size() != 4) {
      throw ConfigError("tables file needs a 'tables' array of 4 crosstalk tables");
    }
    for (std::size_t b = 0; b < 4; ++b) tables[b] = report::crosstalk_table_from_json(doc["tables"][b]);
    j["tables_file"] = fs::path(options.tables_path).filename().string();
  } else {
    const MubTable mubs = build_mub_table(3);
    json depths = json::array();
    json table_doc = json::array();
    for (int b = 1; b <= 4; ++b) {
      RunConfig c = config;
      c.mub_index = b;
      const Sorter sorter = make_sorter(c, mubs);
      tables[static_cast<std::size_t>(b - 1)] =
          crosstalk_table(sorter.spec, mubs, sorter.zmax.common, config.initial_reference_amps);
      depths.push_back(report::round_significant(sorter.zmax.common * 1e3));
      table_doc.push_back(report::to_json(tables[static_cast<std::size_t>(b - 1)]));
    }
    j["operating_depth_mm"] = depths;
    write_file(dir / "qkd_tables.json", report::dump_json({{"tables", table_doc}}));
  }

  const QkdMetrics analytic = qkd_metrics(tables, uniform_bases());
  j["analytic"] = report::to_json(analytic);
  if (options.monte_carlo > 0) {
    const ExchangeResult mc = simulate_exchange(tables, uniform_bases(), options.monte_carlo, config.seed);
    json m = report::to_json(mc);
    const double p = analytic.symbol_error_rate;
    m["binomial_sigma"] =
        report::round_significant(std::sqrt(p * (1.0 - p) / static_cast<double>(std::max<std::uint64_t>(mc.sifted, 1))));
    m["seed"] = config.seed;
    j["monte_carlo"] = m;
  }
  write_file(dir / "qkd.json", report::dump_json(j));
  return j;
}

json cmd_sweep(const RunConfig& config, const CommandOptions& options) {
  static const char* const params[] = {"delta_n",     "n0",         "lambda_nm", "aperture_mm",
                                       "reference_scale", "signal_offset"};
  if (std::find_if(std::begin(params), std::end(params), [&](const char* p) { return options.sweep_param == p; }) ==
      std::end(params)) {
    throw ConfigError("unknown sweep parameter '" + options.sweep_param + "'");
  }
  if (options.sweep_steps < 1) throw ConfigError("sweep needs at least 1 step");
  if (options.sweep_steps == 1 && options.sweep_from != options.sweep_to) {
    throw ConfigError("a 1-step sweep needs --from equal to --to");
  }
  const auto dir = prepare_out_dir(options.out_dir);
  const MubTable mubs = build_mub_table(3);

  std::ostringstream csv;
  csv << options.sweep_param << ",common_mm,min_matched_efficiency,max_unmatched_deviation\n";
  json points = json::array();
  for (int k = 0; k < options.sweep_steps; ++k) {
    const double t = options.sweep_steps > 1 ? static_cast<double>(k) / (options.sweep_steps - 1) : 0.0;
    const double value = options.sweep_from + t * (options.sweep_to - options.sweep_from);
    RunConfig c = config;
    const std::string& p = options.sweep_param;
    if (p == "delta_n") c.delta_n = value;
    if (p == "n0") c.n0 = value;
    if (p == "lambda_nm") c.lambda_nm = value;
    if (p == "aperture_mm") c.aperture_mm = value;
    if (p == "reference_scale") {
      for (std::size_t i = 0; i < 3; ++i) c.reference_tilts[i] = config.reference_tilts[i] * value;
    }
    if (p == "signal_offset") {
      for (std::size_t i = 0; i < 3; ++i) c.signal_tilts[i] = config.signal_tilts[i] + value;
    }
    c.validate();

    const Sorter sorter = make_sorter(c, mubs);
    const CrosstalkTable table = crosstalk_table(sorter.spec, mubs, sorter.zmax.common);
    const double min_eff =
        *std::min_element(sorter.zmax.efficiency_at_common.begin(), sorter.zmax.efficiency_at_common.end());
    double max_dev = 0.0;
    for (const auto& row : table.rows) {
      if (row.mub == c.mub_index) continue;
      for (double q : row.reference) max_dev = std::max(max_dev, std::abs(q - 1.0 / 3.0));
    }
    csv << report::format_number(value) << ',' << report::format_number(sorter.zmax.common * 1e3) << ','
        << report::format_number(min_eff) << ',' << report::format_number(max_dev) << '\n';
    points.push_back({{"value", report::round_significant(value)},
                      {"common_mm", report::round_significant(sorter.zmax.common * 1e3)},
                      {"min_matched_efficiency", report::round_significant(min_eff)},
                      {"max_unmatched_deviation", report::round_significant(max_dev)}});
  }
  write_file(dir / "sweep.csv", csv.str());

  json j = header("sweep", config);
  j["param"] = options.sweep_param;
  j["points"] = points;
  write_file(dir / "sweep.json", report::dump_json(j));
  return j;
}

namespace {

struct Overrides {
  std::string config_path;
  RunConfig values;
  std::vector<double> reference_tilts;
  std::vector<double> signal_tilts;
};

// Registers the config-mirroring flags and the per-command options on `sub`.
void add_common_options(CLI::App* sub, Overrides& o, CommandOptions& opts) {
  sub->add_option("--config", o.config_path, "Flat JSON run configuration");
  sub->add_option("--out", opts.out_dir, "Output directory");
  sub->add_option("--n0", o.values.n0, "Bulk refractive index");
  sub->add_option("--delta-n,--delta_n", o.values.delta_n, "Index modulation depth");
  sub->add_option("--lambda-nm,--lambda_nm", o.values.lambda_nm, "Vacuum wavelength (nm)");
  sub->add_option("--aperture-mm,--aperture_mm", o.values.aperture_mm, "Aperture D (mm)");
  sub->add_option("--emulsion-mm,--emulsion_mm", o.values.emulsion_mm, "Emulsion thickness L (mm)");
  sub->add_option("--mub,--mub-index,--mub_index", o.values.mub_index, "Recorded basis (1..4)");
  sub->add_option("--reference-tilts,--reference_tilts", o.reference_tilts, "Three reference tilts (waves)")
      ->expected(3);
  sub->add_option("--signal-tilts,--signal_tilts", o.signal_tilts, "Three signal tilts (waves)")->expected(3);
  sub->add_flag("--degenerate-kz,--degenerate_kz", o.values.degenerate_kz, "Force rho = sigma = beta");
  sub->add_option("--rk4-step-um,--rk4_step_um", o.values.rk4_step_um, "RK4 step (um)");
  sub->add_option("--seed", o.values.seed, "Monte Carlo seed");
  sub->add_flag("--initial-reference-amps,--initial_reference_amps", o.values.initial_reference_amps,
                "Start reference amplitudes at (1,1,1) instead of 0");
}

RunConfig resolve_config(const CLI::App* sub, const Overrides& o) {
  RunConfig c = o.config_path.empty() ? RunConfig{} : load_run_config(o.config_path);
  const auto given = [&](const char* name) { return sub->count(name) > 0; };
  if (given("--n0")) c.n0 = o.values.n0;
  if (given("--delta-n")) c.delta_n = o.values.delta_n;
  if (given("--lambda-nm")) c.lambda_nm = o.values.lambda_nm;
  if (given("--aperture-mm")) c.aperture_mm = o.values.aperture_mm;
  if (given("--emulsion-mm")) c.emulsion_mm = o.values.emulsion_mm;
  if (given("--mub")) c.mub_index = o.values.mub_index;
  if (given("--reference-tilts")) std::copy_n(o.reference_tilts.begin(), 3, c.reference_tilts.begin());
  if (given("--signal-tilts")) std::copy_n(o.signal_tilts.begin(), 3, c.signal_tilts.begin());
  if (given("--degenerate-kz")) c.degenerate_kz = o.values.degenerate_kz;
  if (given("--rk4-step-um")) c.rk4_step_um = o.values.rk4_step_um;
  if (given("--seed")) c.seed = o.values.seed;
  if (given("--initial-reference-amps")) c.initial_reference_amps = o.values.initial_reference_amps;
  c.validate();
  return c;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multiplexed thick-hologram MUB sorter simulator", "mubsort"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Overrides overrides;
  CommandOptions opts;
  double z_mm = 0.0;

  auto* crosstalk = app.add_subcommand("crosstalk", "12x3 crosstalk table at the operating depth");
  auto* figure2 = app.add_subcommand("figure2", "Reference probabilities against depth for all 12 states");
  auto* zmax = app.add_subcommand("zmax", "Maximum efficiency depths");
  auto* qkd = app.add_subcommand("qkd", "Twelve-state QKD error metrics");
  auto* sweep = app.add_subcommand("sweep", "Operating depth and sorting quality across one parameter");
  for (auto* sub : {crosstalk, figure2, zmax, qkd, sweep}) add_common_options(sub, overrides, opts);

  crosstalk->add_option("--z", z_mm, "Evaluation depth (mm); default is the common operating depth");
  figure2->add_option("--z", z_mm, "Last depth of the grid (mm); default is the emulsion thickness");
  figure2->add_option("--samples", opts.samples, "Grid points per curve")->check(CLI::Range(2, 1000000));
  figure2->add_flag("--svg", opts.svg, "Also write one SVG line chart per state");
  figure2->add_flag("--rk4", opts.rk4_trajectories, "Also write RK4 trajectories of all six modes");
  qkd->add_option("--monte-carlo", opts.monte_carlo, "Number of simulated symbols");
  qkd->add_option("--tables", opts.tables_path, "Use 4 crosstalk tables from this JSON file");
  sweep->add_option("--param", opts.sweep_param,
                    "delta_n | n0 | lambda_nm | aperture_mm | reference_scale | signal_offset");
  sweep->add_option("--from", opts.sweep_from, "First value");
  sweep->add_option("--to", opts.sweep_to, "Last value");
  sweep->add_option("--steps", opts.sweep_steps, "Number of values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const RunConfig config = resolve_config(sub, overrides);
    if ((sub == crosstalk || sub == figure2) && sub->count("--z") > 0) {
      if (!std::isfinite(z_mm) || z_mm < 0.0) throw ConfigError("--z must be a non-negative depth");
      opts.z_mm = z_mm;
    }
    const SorterConfig sc = config.sorter_config();
    for (const auto& w : sc.optical.warnings()) err << "warning: " << w << '\n';
    for (const auto& w : geometry_warnings(sc.reference_tilts, sc.signal_tilts)) err << "warning: " << w << '\n';

    json result;
    if (sub == crosstalk) result = cmd_crosstalk(config, opts);
    if (sub == figure2) result = cmd_figure2(config, opts);
    if (sub == zmax) result = cmd_zmax(config, opts);
    if (sub == qkd) result = cmd_qkd(config, opts);
    if (sub == sweep) result = cmd_sweep(config, opts);
    if (sub == zmax || sub == qkd) out << report::dump_json(result);
    return kExitOk;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace mubsort::cli
