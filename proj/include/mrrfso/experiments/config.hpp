#pragma once

// Flat `key = value [unit]` experiment files. Values may be scalars, comma
// lists or `start:stop:step` ranges; one trailing unit applies to every
// element. Everything is converted to SI on the way in.

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/experiments/spec.hpp"

namespace mrrfso::experiments {

enum class Dim { None, Length, Angle, Area, Power, Ratio, Current2, Speed, Attenuation, Count, Text };

namespace detail {

struct Unit {
  Dim dim;
  double scale;
  bool log_power = false;  // dBm -> W
  bool log_ratio = false;  // dB -> linear
};

inline const std::map<std::string, Unit>& unit_table() {
  static const std::map<std::string, Unit> t = {
      {"m", {Dim::Length, 1.0}},
      {"km", {Dim::Length, 1e3}},
      {"cm", {Dim::Length, 1e-2}},
      {"mm", {Dim::Length, 1e-3}},
      {"um", {Dim::Length, 1e-6}},
      {"nm", {Dim::Length, 1e-9}},
      {"rad", {Dim::Angle, 1.0}},
      {"mrad", {Dim::Angle, 1e-3}},
      {"urad", {Dim::Angle, 1e-6}},
      {"deg", {Dim::Angle, kDegree}},
      {"m2", {Dim::Area, 1.0}},
      {"cm2", {Dim::Area, 1e-4}},
      {"mm2", {Dim::Area, 1e-6}},
      {"W", {Dim::Power, 1.0}},
      {"mW", {Dim::Power, 1e-3}},
      {"dBm", {Dim::Power, 1.0, true}},
      {"dB", {Dim::Ratio, 1.0, false, true}},
      {"A2", {Dim::Current2, 1.0}},
      {"mA2", {Dim::Current2, 1e-6}},
      {"m/s", {Dim::Speed, 1.0}},
      {"km/h", {Dim::Speed, 1.0 / 3.6}},
      {"1/m", {Dim::Attenuation, 1.0}},
      {"1/km", {Dim::Attenuation, 1e-3}},
  };
  return t;
}

inline const char* dim_name(Dim d) {
  switch (d) {
    case Dim::None: return "dimensionless";
    case Dim::Length: return "length";
    case Dim::Angle: return "angle";
    case Dim::Area: return "area";
    case Dim::Power: return "power";
    case Dim::Ratio: return "ratio";
    case Dim::Current2: return "current^2";
    case Dim::Speed: return "speed";
    case Dim::Attenuation: return "attenuation";
    case Dim::Count: return "count";
    case Dim::Text: return "text";
  }
  return "?";
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] inline void fail(ErrorCode code, int line, const std::string& what) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

inline double parse_number(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) fail(ErrorCode::ParseError, line, "not a number: '" + tok + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail(ErrorCode::ParseError, line, "not a number: '" + tok + "'");
  } catch (const std::out_of_range&) {
    fail(ErrorCode::ParseError, line, "number out of range: '" + tok + "'");
  }
}

inline std::vector<double> expand_range(const std::string& tok, int line) {
  const auto parts = split(tok, ':');
  if (parts.size() != 3) fail(ErrorCode::ParseError, line, "range must be start:stop:step");
  const double a = parse_number(parts[0], line);
  const double b = parse_number(parts[1], line);
  const double step = parse_number(parts[2], line);
  if (!(step > 0.0) || b < a) fail(ErrorCode::ParseError, line, "range needs step > 0 and stop >= start");
  std::vector<double> v;
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(a + step * static_cast<double>(i));
  return v;
}

}  // namespace detail

/// Parses a numeric value string and converts it to SI for dimension `dim`.
/// A value without a unit is taken to be SI already.
inline std::vector<double> parse_quantity(const std::string& raw, Dim dim, int line) {
  std::string body = detail::trim(raw);
  std::optional<detail::Unit> unit;
  std::string unit_name;
  const auto sp = body.find_last_of(" \t");
  // A trailing word is a unit when it starts like one; "0.2, 0.5" has none.
  const bool unit_word = sp != std::string::npos && sp + 1 < body.size() &&
                         (std::isalpha(static_cast<unsigned char>(body[sp + 1])) || body.compare(sp + 1, 2, "1/") == 0);
  if (unit_word) {
    unit_name = body.substr(sp + 1);
    body = detail::trim(body.substr(0, sp));
  } else if (sp == std::string::npos && !body.empty() && std::isalpha(static_cast<unsigned char>(body.back()))) {
    // `20dBm` with no space: split at the first letter that is not an exponent marker.
    std::size_t i = 0;
    while (i < body.size()) {
      const char ch = body[i];
      const bool exp_mark = (ch == 'e' || ch == 'E') && i > 0 && i + 1 < body.size() &&
                            (std::isdigit(static_cast<unsigned char>(body[i + 1])) || body[i + 1] == '-' ||
                             body[i + 1] == '+');
      if (std::isalpha(static_cast<unsigned char>(ch)) && !exp_mark) break;
      ++i;
    }
    unit_name = body.substr(i);
    body = detail::trim(body.substr(0, i));
  }
  if (!unit_name.empty()) {
    const auto& table = detail::unit_table();
    const auto it = table.find(unit_name);
    if (it == table.end()) detail::fail(ErrorCode::UnitMismatch, line, "unknown unit '" + unit_name + "'");
    if (it->second.dim != dim) {
      detail::fail(ErrorCode::UnitMismatch, line,
                   "unit '" + unit_name + "' is not a " + std::string(detail::dim_name(dim)));
    }
    unit = it->second;
  }
  if (body.empty()) detail::fail(ErrorCode::ParseError, line, "missing value");

  std::vector<double> values;
  for (const auto& tok : detail::split(body, ',')) {
    if (tok.empty()) detail::fail(ErrorCode::ParseError, line, "empty list element");
    if (tok.find(':') != std::string::npos) {
      for (double v : detail::expand_range(tok, line)) values.push_back(v);
    } else {
      values.push_back(detail::parse_number(tok, line));
    }
  }
  if (unit) {
    for (double& v : values) {
      if (unit->log_power) {
        v = dbm_to_watt(v);
      } else if (unit->log_ratio) {
        v = db_to_linear(v);
      } else {
        v *= unit->scale;
      }
    }
  }
  return values;
}

namespace detail {

inline Dim axis_dim(Axis a) {
  switch (a) {
    case Axis::Pt: return Dim::Power;
    case Axis::theta_div:
    case Axis::sigma_theta_e:
    case Axis::sigma_theta_o: return Dim::Angle;
    case Axis::Z:
    case Axis::w_z: return Dim::Length;
    case Axis::A_r: return Dim::Area;
    case Axis::Cn2: return Dim::None;
  }
  return Dim::None;
}

inline Axis parse_axis(const std::string& s, int line) {
  static const std::map<std::string, Axis> names = {
      {"Pt", Axis::Pt},       {"theta_div", Axis::theta_div},         {"sigma_theta_e", Axis::sigma_theta_e},
      {"Z", Axis::Z},         {"sigma_theta_o", Axis::sigma_theta_o}, {"A_r", Axis::A_r},
      {"Cn2", Axis::Cn2},     {"w_z", Axis::w_z}};
  const auto it = names.find(s);
  if (it == names.end()) fail(ErrorCode::InvalidSpec, line, "unknown axis '" + s + "'");
  return it->second;
}

inline Metric parse_metric(const std::string& s, int line) {
  static const std::map<std::string, Metric> names = {
      {"pdf_h", Metric::pdf_h},       {"cdf_h", Metric::cdf_h},
      {"pdf_snr", Metric::pdf_snr},   {"cdf_snr", Metric::cdf_snr},
      {"outage", Metric::outage},     {"ber", Metric::ber},
      {"pdf_h_simple", Metric::pdf_h_simple}, {"pdf_hmrr", Metric::pdf_hmrr},
      {"pdf_hmrr_sector", Metric::pdf_hmrr_sector}};
  const auto it = names.find(s);
  if (it == names.end()) fail(ErrorCode::InvalidSpec, line, "unknown metric '" + s + "'");
  return it->second;
}

inline Engine parse_engine(const std::string& s, int line) {
  if (s == "analytic") return Engine::analytic;
  if (s == "montecarlo" || s == "mc") return Engine::montecarlo;
  fail(ErrorCode::InvalidSpec, line, "unknown engine '" + s + "'");
}

template <class T>
T pick(const std::string& s, int line, std::initializer_list<std::pair<const char*, T>> options) {
  for (const auto& [name, value] : options) {
    if (s == name) return value;
  }
  std::string allowed;
  for (const auto& o : options) allowed += std::string(allowed.empty() ? "" : "|") + o.first;
  fail(ErrorCode::InvalidSpec, line, "expected one of " + allowed + ", got '" + s + "'");
}

struct Pending {
  std::string value;
  int line = 0;
};

}  // namespace detail

/// Parses experiment text. `origin` only labels error messages.
inline ExperimentSpec parse_config_text(const std::string& text, const std::string& origin = "<string>") {
  ExperimentSpec spec;
  spec.output_path.clear();
  LinkConfig& c = spec.base;
  std::optional<detail::Pending> grid;
  std::vector<detail::Pending> series;
  bool have_sweep = false;
  bool have_metrics = false;
  bool have_engines = false;
  bool zeta_set = false;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  try {
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string::npos) detail::fail(ErrorCode::ParseError, line, "expected key = value");
      const std::string key = detail::trim(s.substr(0, eq));
      const std::string val = detail::trim(s.substr(eq + 1));

      auto one = [&](Dim d) {
        const auto v = parse_quantity(val, d, line);
        if (v.size() != 1) detail::fail(ErrorCode::ParseError, line, "'" + key + "' takes a single value");
        return v.front();
      };
      auto count = [&]() {
        const double v = one(Dim::None);
        if (!(v >= 0.0) || v != std::floor(v)) detail::fail(ErrorCode::ParseError, line, "expected a count");
        return v;
      };

      if (key == "name") spec.name = val;
      else if (key == "output") spec.output_path = val;
      else if (key == "Z") c.Z = one(Dim::Length);
      else if (key == "Z_hg") c.Z_hg = one(Dim::Length);
      else if (key == "Z_hu") c.Z_hu = one(Dim::Length);
      else if (key == "lambda") c.lambda = one(Dim::Length);
      else if (key == "theta_div") c.theta_div = one(Dim::Angle);
      else if (key == "r_g") c.r_g = one(Dim::Length);
      else if (key == "A_r") c.A_r = one(Dim::Area);
      else if (key == "sigma_theta_e") c.sigma_theta_e = one(Dim::Angle);
      else if (key == "sigma_theta_o") c.sigma_theta_o = one(Dim::Angle);
      else if (key == "zeta") {
        c.zeta = one(Dim::Attenuation);
        zeta_set = true;
      } else if (key == "h_l") {
        c.h_l = one(Dim::None);
        zeta_set = false;
      } else if (key == "Cn2") c.cn2_0 = one(Dim::None);
      else if (key == "wind_v") c.wind_v = one(Dim::Speed);
      else if (key == "Pt") c.P_t = one(Dim::Power);
      else if (key == "R_pd") c.R_pd = one(Dim::None);
      else if (key == "sigma_n2") c.sigma_n2 = one(Dim::Current2);
      else if (key == "gamma_th") c.gamma_th = one(Dim::Ratio);
      else if (key == "w_z") spec.w_z = one(Dim::Length);
      else if (key == "sweep") {
        spec.sweep_axis = detail::parse_axis(val, line);
        have_sweep = true;
      } else if (key == "grid") grid = detail::Pending{val, line};
      else if (key == "series") series.push_back({val, line});
      else if (key == "metrics") {
        spec.metrics.clear();
        for (const auto& m : detail::split(val, ',')) spec.metrics.push_back(detail::parse_metric(m, line));
        have_metrics = true;
      } else if (key == "engines") {
        spec.engines.clear();
        for (const auto& e : detail::split(val, ',')) spec.engines.push_back(detail::parse_engine(e, line));
        have_engines = true;
      } else if (key == "regime") {
        spec.regime = detail::pick<RegimeChoice>(
            val, line, {{"auto", RegimeChoice::Auto}, {"weak", RegimeChoice::Weak}, {"strong", RegimeChoice::Strong}});
      } else if (key == "regime_rule") {
        spec.regime_rule = detail::pick<RegimeRule>(val, line, {{"rytov", RegimeRule::Rytov}, {"cn2", RegimeRule::Cn2}});
      } else if (key == "pointing_exponent") {
        spec.pointing_exponent = detail::pick<PointingExponent>(
            val, line, {{"printed", PointingExponent::Printed}, {"consistent", PointingExponent::Consistent}});
      } else if (key == "pointing") {
        spec.pointing = detail::pick<PointingModel>(
            val, line, {{"exact", PointingModel::ExactSine}, {"rayleigh", PointingModel::RayleighApprox}});
      } else if (key == "sectors") {
        spec.sectors = detail::pick<SectorSource>(val, line, {{"fit", SectorSource::Fit}, {"table", SectorSource::Table}});
      } else if (key == "simple_form") {
        spec.simple_form =
            detail::pick<SimpleForm>(val, line, {{"printed", SimpleForm::Printed}, {"with_hc", SimpleForm::WithHc}});
      } else if (key == "N") spec.N = static_cast<int>(count());
      else if (key == "samples") spec.samples = static_cast<std::size_t>(count());
      else if (key == "sector_samples") spec.sector_samples = static_cast<std::size_t>(count());
      else if (key == "seed") spec.seed = static_cast<std::uint64_t>(count());
      else if (key == "eval_points") spec.eval_points = parse_quantity(val, Dim::None, line);
      else if (key == "ber_M") spec.ber_M = static_cast<int>(count());
      else if (key == "ber_gamma_max") spec.ber_gamma_max = one(Dim::None);
      else detail::fail(ErrorCode::UnknownKey, line, "unknown key '" + key + "'");
    }
    if (zeta_set) c.h_l.reset();

    auto missing = [&](const char* k) { detail::fail(ErrorCode::MissingRequired, line, std::string("missing '") + k + "'"); };
    if (!have_sweep) missing("sweep");
    if (!grid) missing("grid");
    if (!have_metrics) missing("metrics");
    if (!have_engines) missing("engines");

    spec.grid = parse_quantity(grid->value, detail::axis_dim(spec.sweep_axis), grid->line);
    for (const auto& p : series) {
      const auto colon = p.value.find(':');
      if (colon == std::string::npos) detail::fail(ErrorCode::ParseError, p.line, "series must be 'axis: values'");
      SeriesAxis ax;
      ax.axis = detail::parse_axis(detail::trim(p.value.substr(0, colon)), p.line);
      ax.values = parse_quantity(p.value.substr(colon + 1), detail::axis_dim(ax.axis), p.line);
      spec.series.push_back(std::move(ax));
    }
  } catch (const Error& e) {
    throw Error(e.code(), origin + ": " + e.message());
  }
  if (spec.output_path.empty()) spec.output_path = spec.name + ".csv";
  validate(spec);
  return spec;
}

inline ExperimentSpec parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace mrrfso::experiments
