#pragma once

// Beam-divergence optimizer and the sigma_theta_e x w_z heatmap, both over
// the analytic objective.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/experiments/runner.hpp"
#include "mrrfso/parallel.hpp"

namespace mrrfso::experiments {

enum class Objective { outage, ber };

inline const char* to_string(Objective o) { return o == Objective::outage ? "outage" : "ber"; }

inline double objective_value(const LinkConfig& cfg, Objective obj, const ModelOptions& o, SectorCache& sectors) {
  const AnalyticModel m = make_model(cfg, o, sectors);
  return obj == Objective::outage ? m.outage() : m.ber().value;
}

struct OptimizeOptions {
  ModelOptions model;
  int scan_points = 25;
  double tol = 1e-6;  // rad
};

struct OptimizeResult {
  double theta = 0.0;
  double value = 0.0;
  // False when the scan minimum sits on a bracket edge; theta is then that edge.
  bool interior = false;
  std::vector<std::pair<double, double>> scan;
};

/// Minimizes the objective over theta_div in [lo, hi]. A log-spaced scan
/// locates the basin, then golden-section search refines it in log theta.
inline OptimizeResult optimize_divergence(const LinkConfig& base, Objective obj, std::pair<double, double> bracket,
                                          const OptimizeOptions& opt = {}) {
  const auto [lo, hi] = bracket;
  if (!(lo > 0.0 && lo < hi)) throw Error(ErrorCode::InvalidSpec, "bracket must satisfy 0 < lo < hi");
  if (lo < 0.1e-3 * (1.0 - 1e-12) || hi > 2e-3 * (1.0 + 1e-12)) {
    throw Error(ErrorCode::OutOfRange, "bracket must lie within [0.1, 2] mrad");
  }
  if (opt.scan_points < 3) throw Error(ErrorCode::InvalidSpec, "scan needs at least 3 points");
  SectorCache sectors;
  auto f = [&](double log_theta) {
    LinkConfig c = base;
    c.theta_div = std::exp(log_theta);
    // The log keeps the bracket search well scaled over decades of outage.
    return std::log(std::max(objective_value(c, obj, opt.model, sectors), 1e-300));
  };

  OptimizeResult res;
  const double a = std::log(lo);
  const double b = std::log(hi);
  const int n = opt.scan_points;
  std::vector<double> u(n);
  std::vector<double> fu(n);
  for (int i = 0; i < n; ++i) {
    u[i] = a + (b - a) * i / (n - 1);
    fu[i] = f(u[i]);
    res.scan.emplace_back(std::exp(u[i]), std::exp(fu[i]));
  }
  const int k = static_cast<int>(std::min_element(fu.begin(), fu.end()) - fu.begin());
  if (k == 0 || k == n - 1) {
    res.theta = std::exp(u[k]);
    res.value = std::exp(fu[k]);
    res.interior = false;
    return res;
  }

  constexpr double kInvPhi = 0.6180339887498949;
  double x0 = u[k - 1];
  double x3 = u[k + 1];
  double x1 = x3 - kInvPhi * (x3 - x0);
  double x2 = x0 + kInvPhi * (x3 - x0);
  double f1 = f(x1);
  double f2 = f(x2);
  // Tolerance is absolute in theta; in log space it scales with theta.
  while (std::exp(x3) - std::exp(x0) > opt.tol) {
    if (f1 < f2) {
      x3 = x2;
      x2 = x1;
      f2 = f1;
      x1 = x3 - kInvPhi * (x3 - x0);
      f1 = f(x1);
    } else {
      x0 = x1;
      x1 = x2;
      f1 = f2;
      x2 = x0 + kInvPhi * (x3 - x0);
      f2 = f(x2);
    }
  }
  const double xm = f1 < f2 ? x1 : x2;
  res.theta = std::exp(xm);
  res.value = std::exp(std::min(f1, f2));
  res.interior = true;
  return res;
}

struct Heatmap {
  std::vector<double> sigma_theta_e;
  std::vector<double> w_z;
  std::vector<std::vector<double>> values;  // [sigma_theta_e][w_z]
  std::vector<std::string> errors;          // row-major, empty when fine

  /// Index of the smallest value in row i; failed (NaN) cells never win.
  std::size_t argmin(std::size_t i) const {
    const auto& r = values[i];
    auto less = [](double a, double b) { return std::isnan(b) ? !std::isnan(a) : a < b; };
    return static_cast<std::size_t>(std::min_element(r.begin(), r.end(), less) - r.begin());
  }
};

/// Every cell is an independent objective evaluation with theta_div = w_z / Z.
inline Heatmap heatmap(const LinkConfig& base, const std::vector<double>& sigma_e, const std::vector<double>& w_z,
                       Objective obj, const ModelOptions& o = {}) {
  if (sigma_e.empty() || w_z.empty()) throw Error(ErrorCode::InvalidSpec, "heatmap grids must not be empty");
  Heatmap h;
  h.sigma_theta_e = sigma_e;
  h.w_z = w_z;
  h.values.assign(sigma_e.size(), std::vector<double>(w_z.size(), std::nan("")));
  h.errors.assign(sigma_e.size() * w_z.size(), "");
  SectorCache sectors;
  // Builds the sector model (if any) once, so cells only read the cache.
  make_model(base, o, sectors);
  ModelOptions inner = o;
  inner.workers = 1;
  parallel_for(sigma_e.size() * w_z.size(), o.workers, [&](std::size_t idx) {
    const std::size_t i = idx / w_z.size();
    const std::size_t j = idx % w_z.size();
    LinkConfig c = base;
    c.sigma_theta_e = sigma_e[i];
    c.theta_div = w_z[j] / c.Z;
    try {
      h.values[i][j] = objective_value(c, obj, inner, sectors);
    } catch (const Error& e) {
      h.errors[idx] = e.what();
    }
  });
  return h;
}

}  // namespace mrrfso::experiments
