#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>

#include "mubsort/qkd.hpp"
#include "mubsort/sorter.hpp"

namespace mubsort::report {

/// 9 significant digits, '.' decimal separator, no locale dependence.
std::string format_number(double x);
/// The double that format_number(x) denotes.
double round_significant(double x);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump_json(const nlohmann::json& j);

nlohmann::json to_json(const CrosstalkTable& table);
/// Inverse of to_json(CrosstalkTable); throws InvalidSpec on schema errors.
CrosstalkTable crosstalk_table_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ZmaxResult& result);
nlohmann::json to_json(const QkdMetrics& metrics);
nlohmann::json to_json(const ExchangeResult& result);

/// state,p_r1,p_r2,p_r3,p_residual
void write_crosstalk_csv(std::ostream& os, const CrosstalkTable& table);
/// z_mm,p_r1,p_r2,p_r3
void write_panel_csv(std::ostream& os, const Figure2Panel& panel);
/// z_m,p_r1,p_r2,p_r3,p_sa,p_sb,p_sc
void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

/// Static line chart of the three reference probabilities against depth.
/// r1 solid, r2 dashed, r3 dotted.
std::string panel_svg(const Figure2Panel& panel);

}  // namespace mubsort::report
