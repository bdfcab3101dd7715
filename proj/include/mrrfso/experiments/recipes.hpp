#pragma once

// Named figure recipes. Parameters a caption leaves open take the library
// defaults (heights 2 m / 102 m, h_l = 0.7, A_r = 1 cm^2 unless stated);
// those choices are ours.

#include <string>
#include <vector>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/experiments/spec.hpp"

namespace mrrfso::experiments {

namespace detail {

inline std::vector<double> dbm_grid(double from, double to, double step) {
  std::vector<double> v;
  for (double p = from; p <= to + 1e-9; p += step) v.push_back(dbm_to_watt(p));
  return v;
}

inline ExperimentSpec named(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  s.output_path = name + ".csv";
  return s;
}

}  // namespace detail

inline std::vector<std::string> recipe_names() {
  return {"fig7", "fig8", "fig9", "fig10", "fig11", "fig12", "fig13", "fig14", "fig15"};
}

inline ExperimentSpec recipe(const std::string& name) {
  ExperimentSpec s = detail::named(name);
  LinkConfig& c = s.base;
  if (name == "fig7") {
    // Weak-turbulence channel and SNR distributions.
    c.cn2_0 = 5e-15;
    c.sigma_theta_e = 100e-6;
    s.regime = RegimeChoice::Weak;
    s.sweep_axis = Axis::sigma_theta_o;
    s.grid = {2.0 * kDegree, 8.0 * kDegree};
    s.metrics = {Metric::pdf_h, Metric::cdf_h, Metric::pdf_snr, Metric::cdf_snr};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig8") {
    // Strong-turbulence channel PDF, full and simplified.
    c.cn2_0 = 1e-13;
    c.sigma_theta_e = 90e-6;
    s.regime = RegimeChoice::Strong;
    s.sweep_axis = Axis::sigma_theta_o;
    s.grid = {2.0 * kDegree, 8.0 * kDegree};
    s.metrics = {Metric::pdf_h, Metric::pdf_h_simple};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig9") {
    c.sigma_theta_o = 6.0 * kDegree;
    c.sigma_theta_e = 100e-6;
    s.regime = RegimeChoice::Strong;
    s.sweep_axis = Axis::Pt;
    s.grid = detail::dbm_grid(0.0, 30.0, 2.0);
    s.series = {{Axis::Cn2, {1e-14, 5e-14, 1e-13}}};
    s.metrics = {Metric::outage};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig10") {
    c.sigma_theta_o = 6.0 * kDegree;
    c.cn2_0 = 5e-14;
    s.w_z = 0.40;
    s.regime = RegimeChoice::Strong;
    s.sweep_axis = Axis::Pt;
    s.grid = detail::dbm_grid(0.0, 30.0, 2.0);
    s.series = {{Axis::A_r, {0.5e-4, 1e-4, 2e-4, 4e-4}}};
    s.metrics = {Metric::outage};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig11") {
    s.w_z = 0.30;
    s.regime = RegimeChoice::Weak;
    s.sweep_axis = Axis::Pt;
    s.grid = detail::dbm_grid(0.0, 30.0, 1.0);
    s.series = {{Axis::sigma_theta_e, {100e-6, 200e-6}}, {Axis::sigma_theta_o, {2.0 * kDegree, 6.0 * kDegree}}};
    s.metrics = {Metric::ber};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig12") {
    c.theta_div = 0.4e-3;
    c.A_r = 1e-4;
    s.regime = RegimeChoice::Weak;
    s.sweep_axis = Axis::Pt;
    s.grid = detail::dbm_grid(0.0, 30.0, 2.0);
    s.series = {{Axis::Z, {800.0, 1000.0, 1200.0, 1400.0}}};
    s.metrics = {Metric::ber};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig13") {
    // h_MRR density against its log-normal surrogate.
    s.regime = RegimeChoice::Weak;
    s.sweep_axis = Axis::sigma_theta_o;
    s.grid = {1.0 * kDegree, 5.0 * kDegree, 10.0 * kDegree};
    s.metrics = {Metric::pdf_hmrr};
    s.engines = {Engine::analytic, Engine::montecarlo};
  } else if (name == "fig14") {
    c.P_t = dbm_to_watt(20.0);
    c.sigma_theta_o = 5.0 * kDegree;
    c.sigma_theta_e = 100e-6;
    s.regime = RegimeChoice::Weak;
    s.sweep_axis = Axis::theta_div;
    for (int i = 0; i <= 38; ++i) s.grid.push_back((0.1 + 0.05 * i) * 1e-3);
    s.series = {{Axis::Z, {800.0, 1000.0, 1200.0, 1400.0}}};
    s.metrics = {Metric::outage};
    s.engines = {Engine::analytic};
  } else if (name == "fig15") {
    // Heatmap as a table: one w_z sweep per sigma_theta_e.
    c.P_t = dbm_to_watt(25.0);
    c.sigma_theta_o = 5.0 * kDegree;
    s.regime = RegimeChoice::Weak;
    s.sweep_axis = Axis::w_z;
    for (int i = 0; i <= 30; ++i) s.grid.push_back(0.10 + 0.02 * i);
    s.series = {{Axis::sigma_theta_e, {50e-6, 75e-6, 100e-6, 125e-6, 150e-6, 175e-6, 200e-6}}};
    s.metrics = {Metric::outage};
    s.engines = {Engine::analytic};
  } else {
    throw Error(ErrorCode::UnknownKey, "unknown recipe '" + name + "'");
  }
  return s;
}

}  // namespace mrrfso::experiments
