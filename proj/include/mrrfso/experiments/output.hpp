#pragma once

// CSV rows plus a JSON sidecar holding the resolved spec. Nothing
// time- or host-dependent is written, so reruns are byte-identical.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/experiments/runner.hpp"
#include "mrrfso/experiments/spec.hpp"
#include "mrrfso/version.hpp"

namespace mrrfso::experiments {

inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace detail

inline std::string to_csv(const RunResult& r) {
  std::ostringstream os;
  for (const auto& ax : r.spec.series) os << to_string(ax.axis) << ',';
  os << to_string(r.spec.sweep_axis) << ",metric,engine,regime,x,value,lo,hi,method,flag,error\n";
  for (const auto& row : r.rows) {
    for (double v : row.series) os << format_number(v) << ',';
    os << format_number(row.axis) << ',' << to_string(row.metric) << ',' << to_string(row.engine) << ','
       << row.regime << ',' << format_number(row.x) << ',' << format_number(row.value) << ','
       << format_number(row.lo) << ',' << format_number(row.hi) << ',' << row.method << ',' << row.flag << ','
       << detail::csv_field(row.error) << '\n';
  }
  return os.str();
}

inline nlohmann::json to_json(const LinkConfig& c) {
  nlohmann::json j;
  j["Z"] = c.Z;
  j["Z_hg"] = c.Z_hg;
  j["Z_hu"] = c.Z_hu;
  j["lambda"] = c.lambda;
  j["theta_div"] = c.theta_div;
  j["r_g"] = c.r_g;
  j["A_r"] = c.A_r;
  j["sigma_theta_e"] = c.sigma_theta_e;
  j["sigma_theta_o"] = c.sigma_theta_o;
  j["zeta"] = c.zeta ? nlohmann::json(*c.zeta) : nlohmann::json(nullptr);
  j["h_l"] = c.h_l ? nlohmann::json(*c.h_l) : nlohmann::json(nullptr);
  j["Cn2"] = c.cn2_0;
  j["wind_v"] = c.wind_v;
  j["Pt"] = c.P_t;
  j["R_pd"] = c.R_pd;
  j["sigma_n2"] = c.sigma_n2;
  j["gamma_th"] = c.gamma_th;
  return j;
}

inline nlohmann::json to_json(const ExperimentSpec& s) {
  nlohmann::json j;
  j["name"] = s.name;
  j["base"] = to_json(s.base);
  j["w_z"] = s.w_z ? nlohmann::json(*s.w_z) : nlohmann::json(nullptr);
  j["sweep"] = to_string(s.sweep_axis);
  j["grid"] = s.grid;
  auto& series = j["series"] = nlohmann::json::array();
  for (const auto& ax : s.series) series.push_back({{"axis", to_string(ax.axis)}, {"values", ax.values}});
  auto& metrics = j["metrics"] = nlohmann::json::array();
  for (Metric m : s.metrics) metrics.push_back(to_string(m));
  auto& engines = j["engines"] = nlohmann::json::array();
  for (Engine e : s.engines) engines.push_back(to_string(e));
  j["output"] = s.output_path;
  j["regime"] = s.regime == RegimeChoice::Auto ? "auto" : s.regime == RegimeChoice::Weak ? "weak" : "strong";
  j["regime_rule"] = s.regime_rule == RegimeRule::Rytov ? "rytov" : "cn2";
  j["pointing_exponent"] = s.pointing_exponent == PointingExponent::Printed ? "printed" : "consistent";
  j["pointing"] = s.pointing == PointingModel::ExactSine ? "exact" : "rayleigh";
  j["sectors"] = s.sectors == SectorSource::Fit ? "fit" : "table";
  j["simple_form"] = s.simple_form == SimpleForm::Printed ? "printed" : "with_hc";
  j["N"] = s.N;
  j["samples"] = s.samples;
  j["sector_samples"] = s.sector_samples;
  j["seed"] = s.seed;
  j["eval_points"] = s.eval_points;
  j["ber_M"] = s.ber_M;
  j["ber_gamma_max"] = s.ber_gamma_max;
  return j;
}

inline nlohmann::json sidecar(const RunResult& r) {
  nlohmann::json j;
  j["library"] = "mrrfso";
  j["version"] = kVersion;
  j["spec"] = to_json(r.spec);
  j["rows"] = r.rows.size();
  j["tolerance_flags"] = r.flags;
  j["row_errors"] = r.errors;
  return j;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path);
}

/// Writes `path` and `path.json`.
inline void write_result(const RunResult& r, const std::string& path) {
  write_text(path, to_csv(r));
  write_text(path + ".json", sidecar(r).dump(2) + "\n");
}

}  // namespace mrrfso::experiments
