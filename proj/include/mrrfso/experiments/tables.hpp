#pragma once

// Monte-Carlo regeneration of the h_MRR moment table and the N = 8 sector
// densities, with per-entry comparison against the built-in tables.

#include <cmath>
#include <cstdint>
#include <vector>

#include "mrrfso/channel.hpp"
#include "mrrfso/mrr.hpp"

namespace mrrfso::experiments {

struct MomentRow {
  double sigma_deg = 0.0;
  double mu = 0.0;
  double sd = 0.0;
  double mu_ref = 0.0;
  double sd_ref = 0.0;
  bool ok = false;  // |mu - mu_ref| <= 0.01 and |sd - sd_ref| <= 0.005
};

inline std::vector<MomentRow> regenerate_moment_table(std::size_t samples, std::uint64_t seed, unsigned workers = 1) {
  const MrrMomentTable ref = MrrMomentTable::builtin();
  std::vector<MomentRow> rows;
  for (std::size_t i = 0; i < ref.sigma_deg.size(); ++i) {
    if (ref.sigma_deg[i] == 0.0) continue;  // the 0 degree node is exact, not simulated
    const auto h = sample_hmrr(ref.sigma_deg[i] * kDegree, samples, seed, workers);
    double s = 0.0;
    for (double v : h) s += v;
    const double mu = s / static_cast<double>(h.size());
    double ss = 0.0;
    for (double v : h) ss += (v - mu) * (v - mu);
    MomentRow r;
    r.sigma_deg = ref.sigma_deg[i];
    r.mu = mu;
    r.sd = std::sqrt(ss / static_cast<double>(h.size() - 1));
    r.mu_ref = ref.mu[i];
    r.sd_ref = ref.sd[i];
    r.ok = std::abs(r.mu - r.mu_ref) <= 0.01 && std::abs(r.sd - r.sd_ref) <= 0.005;
    rows.push_back(r);
  }
  return rows;
}

struct SectorRow {
  double sigma_deg = 0.0;
  SectorModel fitted;
  std::vector<double> B_ref;        // as tabulated
  std::vector<double> B_ref_unit;   // rescaled to unit mass on the fitted breakpoints
  double worst_ratio = 0.0;         // max_n |B_n / B_ref_unit_n - 1|
  bool ok = false;           // worst_ratio <= 0.10
};

inline std::vector<SectorRow> regenerate_sector_table(std::size_t samples, std::uint64_t seed, unsigned workers = 1) {
  const SectorTable ref = SectorTable::builtin();
  std::vector<SectorRow> rows;
  for (std::size_t i = 0; i < ref.sigma_deg.size(); ++i) {
    SectorRow r;
    r.sigma_deg = ref.sigma_deg[i];
    r.fitted = fit_sector_model(sample_hmrr(r.sigma_deg * kDegree, samples, seed, workers), 8);
    r.B_ref.assign(ref.B[i].begin(), ref.B[i].end());
    double mass = 0.0;
    for (int n = 0; n < 8; ++n) mass += r.B_ref[n] * (r.fitted.V[n + 1] - r.fitted.V[n]);
    for (double b : r.B_ref) r.B_ref_unit.push_back(b / mass);
    for (int n = 0; n < 8; ++n) {
      r.worst_ratio = std::max(r.worst_ratio, std::abs(r.fitted.B[n] / r.B_ref_unit[n] - 1.0));
    }
    r.ok = r.worst_ratio <= 0.10;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace mrrfso::experiments
