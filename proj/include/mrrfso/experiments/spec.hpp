#pragma once

// Declarative description of one experiment: a base link, a swept axis, any
// number of series axes (Cartesian product), the metrics and the engines.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mrrfso/analytic_strong.hpp"
#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/montecarlo.hpp"

namespace mrrfso::experiments {

enum class Axis { Pt, theta_div, sigma_theta_e, sigma_theta_o, Z, A_r, Cn2, w_z };

enum class Metric { pdf_h, cdf_h, pdf_snr, cdf_snr, outage, ber, pdf_h_simple, pdf_hmrr, pdf_hmrr_sector };

enum class Engine { analytic, montecarlo };

enum class RegimeChoice { Auto, Weak, Strong };

enum class RegimeRule { Rytov, Cn2 };

enum class SectorSource { Fit, Table };

inline const char* to_string(Axis a) {
  switch (a) {
    case Axis::Pt: return "Pt";
    case Axis::theta_div: return "theta_div";
    case Axis::sigma_theta_e: return "sigma_theta_e";
    case Axis::sigma_theta_o: return "sigma_theta_o";
    case Axis::Z: return "Z";
    case Axis::A_r: return "A_r";
    case Axis::Cn2: return "Cn2";
    case Axis::w_z: return "w_z";
  }
  return "?";
}

inline const char* to_string(Metric m) {
  switch (m) {
    case Metric::pdf_h: return "pdf_h";
    case Metric::cdf_h: return "cdf_h";
    case Metric::pdf_snr: return "pdf_snr";
    case Metric::cdf_snr: return "cdf_snr";
    case Metric::outage: return "outage";
    case Metric::ber: return "ber";
    case Metric::pdf_h_simple: return "pdf_h_simple";
    case Metric::pdf_hmrr: return "pdf_hmrr";
    case Metric::pdf_hmrr_sector: return "pdf_hmrr_sector";
  }
  return "?";
}

inline const char* to_string(Engine e) { return e == Engine::analytic ? "analytic" : "montecarlo"; }

/// Metrics evaluated at a list of abscissae rather than once per grid point.
inline bool is_distribution(Metric m) {
  return m == Metric::pdf_h || m == Metric::cdf_h || m == Metric::pdf_snr || m == Metric::cdf_snr ||
         m == Metric::pdf_h_simple || m == Metric::pdf_hmrr || m == Metric::pdf_hmrr_sector;
}

struct SeriesAxis {
  Axis axis = Axis::Pt;
  std::vector<double> values;
};

struct ExperimentSpec {
  std::string name = "experiment";
  LinkConfig base;
  // When set, theta_div follows Z so the beamwidth stays at this value.
  std::optional<double> w_z;
  Axis sweep_axis = Axis::Pt;
  std::vector<double> grid;
  std::vector<SeriesAxis> series;
  std::vector<Metric> metrics;
  std::vector<Engine> engines;
  std::string output_path;

  RegimeChoice regime = RegimeChoice::Auto;
  RegimeRule regime_rule = RegimeRule::Rytov;
  PointingExponent pointing_exponent = PointingExponent::Printed;
  PointingModel pointing = PointingModel::ExactSine;
  SectorSource sectors = SectorSource::Fit;
  SimpleForm simple_form = SimpleForm::WithHc;
  int N = 8;
  std::size_t samples = 1000000;
  std::size_t sector_samples = 1000000;
  std::uint64_t seed = 1;
  // Abscissae for distribution metrics, relative to the natural scale of
  // the metric (see runner). Empty selects the default grid.
  std::vector<double> eval_points;
  int ber_M = 20;
  double ber_gamma_max = 4.0;
};

inline void validate(const ExperimentSpec& s) {
  if (s.grid.empty()) throw Error(ErrorCode::InvalidSpec, "grid must not be empty");
  for (std::size_t i = 1; i < s.grid.size(); ++i) {
    if (!(s.grid[i] > s.grid[i - 1])) throw Error(ErrorCode::InvalidSpec, "grid must be strictly increasing");
  }
  if (s.metrics.empty()) throw Error(ErrorCode::InvalidSpec, "at least one metric is required");
  if (s.engines.empty()) throw Error(ErrorCode::InvalidSpec, "at least one engine is required");
  for (const auto& ax : s.series) {
    if (ax.values.empty()) throw Error(ErrorCode::InvalidSpec, "series values must not be empty");
    if (ax.axis == s.sweep_axis) throw Error(ErrorCode::InvalidSpec, "series axis duplicates the sweep axis");
  }
  if (s.N < 2) throw Error(ErrorCode::InvalidSpec, "N must be at least 2");
  if (s.samples < 1) throw Error(ErrorCode::InvalidSpec, "samples must be at least 1");
  validate(s.base);
}

/// Applies one axis value to a config. w_z is pinned through `w_z_pin`.
inline void apply_axis(LinkConfig& c, std::optional<double>& w_z_pin, Axis a, double v) {
  switch (a) {
    case Axis::Pt: c.P_t = v; break;
    case Axis::theta_div:
      c.theta_div = v;
      w_z_pin.reset();
      break;
    case Axis::sigma_theta_e: c.sigma_theta_e = v; break;
    case Axis::sigma_theta_o: c.sigma_theta_o = v; break;
    case Axis::Z: c.Z = v; break;
    case Axis::A_r: c.A_r = v; break;
    case Axis::Cn2: c.cn2_0 = v; break;
    case Axis::w_z: w_z_pin = v; break;
  }
}

}  // namespace mrrfso::experiments
