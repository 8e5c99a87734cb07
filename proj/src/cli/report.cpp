#include "mubsort/cli/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <system_error>

#include "mubsort/error.hpp"

namespace mubsort::report {

using nlohmann::json;

std::string format_number(double x) {
  if (!std::isfinite(x)) throw NumericalError("cannot serialize a non-finite value");
  if (x == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 9);
  if (res.ec != std::errc{}) throw NumericalError("number formatting failed");
  return std::string(buf, res.ptr);
}

double round_significant(double x) {
  const std::string s = format_number(x);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

json to_json(const CrosstalkTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"state", r.label},
                    {"mub", r.mub},
                    {"index", r.index},
                    {"p_r1", round_significant(r.reference[0])},
                    {"p_r2", round_significant(r.reference[1])},
                    {"p_r3", round_significant(r.reference[2])},
                    {"p_residual", round_significant(r.residual)}});
  }
  return {{"sorter_mub", table.sorter_mub}, {"z_eval_mm", round_significant(table.z_eval * 1e3)}, {"rows", rows}};
}

CrosstalkTable crosstalk_table_from_json(const json& j) {
  try {
    CrosstalkTable table;
    table.sorter_mub = j.at("sorter_mub").get<int>();
    table.z_eval = j.at("z_eval_mm").get<double>() * 1e-3;
    for (const auto& r : j.at("rows")) {
      CrosstalkRow row;
      row.label = r.at("state").get<std::string>();
      row.mub = r.at("mub").get<int>();
      row.index = r.at("index").get<int>();
      row.reference = {r.at("p_r1").get<double>(), r.at("p_r2").get<double>(), r.at("p_r3").get<double>()};
      row.residual = r.at("p_residual").get<double>();
      table.rows.push_back(std::move(row));
    }
    return table;
  } catch (const json::exception& e) {
    throw InvalidSpec(std::string("malformed crosstalk table: ") + e.what());
  }
}

json to_json(const ZmaxResult& result) {
  json per_state = json::array();
  json efficiency = json::array();
  for (std::size_t i = 0; i < 3; ++i) {
    per_state.push_back(round_significant(result.per_state[i] * 1e3));
    efficiency.push_back(round_significant(result.efficiency_at_common[i]));
  }
  return {{"per_state_mm", per_state},
          {"common_mm", round_significant(result.common * 1e3)},
          {"efficiency", efficiency}};
}

json to_json(const QkdMetrics& metrics) {
  json per_basis = json::array();
  for (double v : metrics.per_basis_ser) per_basis.push_back(round_significant(v));
  return {{"sift_fraction", round_significant(metrics.sift_fraction)},
          {"symbol_error_rate", round_significant(metrics.symbol_error_rate)},
          {"per_basis_ser", per_basis}};
}

json to_json(const ExchangeResult& result) {
  json j = to_json(result.metrics);
  j["n_symbols"] = result.symbols;
  j["sifted"] = result.sifted;
  j["errors"] = result.errors;
  return j;
}

void write_crosstalk_csv(std::ostream& os, const CrosstalkTable& table) {
  os << "state,p_r1,p_r2,p_r3,p_residual\n";
  for (const auto& r : table.rows) {
    os << r.label << ',' << format_number(r.reference[0]) << ',' << format_number(r.reference[1]) << ','
       << format_number(r.reference[2]) << ',' << format_number(r.residual) << '\n';
  }
}

void write_panel_csv(std::ostream& os, const Figure2Panel& panel) {
  os << "z_mm,p_r1,p_r2,p_r3\n";
  const auto& t = panel.trajectory;
  for (std::size_t n = 0; n < t.z.size(); ++n) {
    os << format_number(t.z[n] * 1e3);
    for (std::size_t i = 0; i < 3; ++i) os << ',' << format_number(t.probabilities[n][i]);
    os << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  os << "z_m,p_r1,p_r2,p_r3,p_sa,p_sb,p_sc\n";
  for (std::size_t n = 0; n < trajectory.z.size(); ++n) {
    os << format_number(trajectory.z[n]);
    for (double p : trajectory.probabilities[n]) os << ',' << format_number(p);
    os << '\n';
  }
}

std::string panel_svg(const Figure2Panel& panel) {
  constexpr double width = 360.0, height = 240.0;
  constexpr double left = 48.0, right = 12.0, top = 24.0, bottom = 36.0;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  const auto& t = panel.trajectory;
  const double z_end = t.z.empty() ? 1.0 : t.z.back();
  const auto px = [&](double z) { return left + plot_w * (z_end > 0.0 ? z / z_end : 0.0); };
  const auto py = [&](double p) { return top + plot_h * (1.0 - p); };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << format_number(width) << "\" height=\""
      << format_number(height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  svg << "<rect x=\"" << format_number(left) << "\" y=\"" << format_number(top) << "\" width=\""
      << format_number(plot_w) << "\" height=\"" << format_number(plot_h)
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << format_number(left) << "\" y=\"16\">" << panel.label << "</text>\n";
  svg << "<text x=\"" << format_number(left + plot_w / 2) << "\" y=\"" << format_number(height - 8)
      << "\" text-anchor=\"middle\">z (mm), 0 to " << format_number(z_end * 1e3) << "</text>\n";
  svg << "<text x=\"" << format_number(left - 6) << "\" y=\"" << format_number(py(1.0) + 4)
      << "\" text-anchor=\"end\">1</text>\n";
  svg << "<text x=\"" << format_number(left - 6) << "\" y=\"" << format_number(py(0.0) + 4)
      << "\" text-anchor=\"end\">0</text>\n";

  constexpr const char* dashes[3] = {"", " stroke-dasharray=\"6 4\"", " stroke-dasharray=\"1 3\""};
  for (std::size_t i = 0; i < 3; ++i) {
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1.2\"" << dashes[i] << " points=\"";
    for (std::size_t n = 0; n < t.z.size(); ++n) {
      if (n > 0) svg << ' ';
      svg << format_number(round_significant(px(t.z[n]))) << ',' << format_number(py(t.probabilities[n][i]));
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace mubsort::report
