#pragma once

// Retroreflector scattering: per-mirror reflection ratio, sampling of h_MRR,
// its moment-matched log-normal density, and the sector approximation.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/parallel.hpp"
#include "mrrfso/random.hpp"
#include "mrrfso/specfun.hpp"

namespace mrrfso {

/// Substream ids. Each random component of a sample gets its own stream so
/// rejection samplers in one component never shift the draws of another.
namespace stream {
constexpr std::uint32_t kMrr = 1;
constexpr std::uint32_t kPointing = 2;
constexpr std::uint32_t kFadingUp = 3;
constexpr std::uint32_t kFadingDown = 4;
}  // namespace stream

/// Directly reflected fraction for one mirror tilted by theta.
inline double hmrr_component(double theta) {
  if (!(std::abs(theta) < std::numbers::pi / 2.0)) {
    throw Error(ErrorCode::DomainError, "hmrr_component requires |theta| < pi/2");
  }
  return std::max(0.0, 1.0 - std::tan(std::abs(theta)));
}

/// One h_MRR draw for sample `index`: three independent mirror tilts.
inline double draw_hmrr(double sigma_theta_o, std::uint64_t seed, std::uint64_t index) {
  if (sigma_theta_o == 0.0) return 1.0;
  PhiloxStream rng(seed, index, stream::kMrr);
  std::normal_distribution<double> tilt(0.0, sigma_theta_o);
  double h = 1.0;
  for (int k = 0; k < 3; ++k) {
    const double t = tilt(rng);
    // Tilts past 45 degrees reflect nothing; guard tan() near pi/2.
    h *= std::abs(t) >= std::numbers::pi / 4.0 ? 0.0 : 1.0 - std::tan(std::abs(t));
  }
  return h;
}

inline std::vector<double> sample_hmrr(double sigma_theta_o, std::size_t n, std::uint64_t seed,
                                       unsigned workers = 1) {
  std::vector<double> out(n);
  constexpr std::size_t kBlock = 1 << 16;
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) out[i] = draw_hmrr(sigma_theta_o, seed, i);
  });
  return out;
}

struct MrrMoments {
  double mu = 1.0;
  double sd = 0.0;
  bool clamped = false;  // sigma was outside the table and was clamped
};

/// Mean and SD of h_MRR tabulated against sigma_theta_o in degrees.
struct MrrMomentTable {
  std::vector<double> sigma_deg;
  std::vector<double> mu;
  std::vector<double> sd;

  static MrrMomentTable builtin() {
    return {{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11},
            {1.0, 0.96, 0.93, 0.89, 0.86, 0.83, 0.8, 0.76, 0.73, 0.70, 0.66, 0.62},
            {0.0, 0.0178, 0.035, 0.052, 0.066, 0.083, 0.094, 0.11, 0.12, 0.13, 0.145, 0.158}};
  }

  MrrMoments lookup(double sigma_theta_o) const {
    const double deg = sigma_theta_o / kDegree;
    MrrMoments m;
    m.clamped = deg < sigma_deg.front() || deg > sigma_deg.back();
    m.mu = specfun::interp_table(sigma_deg, mu, deg);
    m.sd = specfun::interp_table(sigma_deg, sd, deg);
    return m;
  }
};

namespace detail {

inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path, std::size_t min_cols) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": non-numeric cell");
    }
    if (row.size() < min_cols) {
      throw Error(ErrorCode::ParseError, path + ":" + std::to_string(lineno) + ": too few columns");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Reads a moment table from CSV with columns sigma_deg, mu, sd.
inline MrrMomentTable load_moment_table(const std::string& path) {
  MrrMomentTable t;
  for (const auto& r : detail::read_numeric_csv(path, 3)) {
    t.sigma_deg.push_back(r[0]);
    t.mu.push_back(r[1]);
    t.sd.push_back(r[2]);
  }
  return t;
}

inline MrrMoments mrr_moments(double sigma_theta_o) { return MrrMomentTable::builtin().lookup(sigma_theta_o); }

/// Moment-matched log-normal density of h_MRR.
inline double lognormal_hmrr_pdf(double h, double mu, double sd) {
  if (!(h > 0.0)) return 0.0;
  const double s2 = std::log1p(sd * sd / (mu * mu));
  const double loc = std::log(mu * mu / std::sqrt(mu * mu + sd * sd));
  const double x = std::log(h) - loc;
  return std::exp(-x * x / (2.0 * s2)) / (h * std::sqrt(2.0 * std::numbers::pi * s2));
}

/// Piecewise-constant density on N sectors [V_n, V_{n+1}), V_{N+1} = 1.
struct SectorModel {
  std::vector<double> V;  // N + 1 breakpoints
  std::vector<double> B;  // N densities

  int N() const { return static_cast<int>(B.size()); }

  double mass() const {
    double m = 0.0;
    for (int n = 0; n < N(); ++n) m += B[n] * (V[n + 1] - V[n]);
    return m;
  }

  double pdf(double h) const {
    for (int n = 0; n < N(); ++n) {
      if (h >= V[n] && h < V[n + 1]) return B[n];
    }
    return h == V.back() && N() > 0 ? B.back() : 0.0;
  }
};

/// Equal-width breakpoints on [2 mu - 1, 1].
inline std::vector<double> sector_breakpoints(double mu, int N) {
  std::vector<double> v(N + 1);
  const double lo = 2.0 * mu - 1.0;
  for (int n = 0; n <= N; ++n) v[n] = lo + (1.0 - lo) * n / N;
  v[N] = 1.0;
  return v;
}

/// Histogram fit of the sector densities, renormalized to unit mass. `mu`
/// places the lowest breakpoint; by default the sample mean is used.
inline SectorModel fit_sector_model(const std::vector<double>& samples, int N, std::optional<double> mu = {}) {
  if (N < 2) throw Error(ErrorCode::InvalidSpec, "fit_sector_model needs N >= 2");
  if (samples.size() < 10000) {
    throw Error(ErrorCode::InsufficientSamples, "fit_sector_model needs at least 1e4 samples");
  }
  double m = 0.0;
  if (mu) {
    m = *mu;
  } else {
    for (double s : samples) m += s;
    m /= static_cast<double>(samples.size());
  }
  SectorModel model;
  model.V = sector_breakpoints(m, N);
  const double lo = model.V.front();
  const double width = (1.0 - lo) / N;
  std::vector<double> counts(N, 0.0);
  for (double s : samples) {
    if (s < lo || s > 1.0) continue;
    const int k = std::min(N - 1, static_cast<int>((s - lo) / width));
    counts[k] += 1.0;
  }
  model.B.resize(N);
  double inside = 0.0;
  for (double c : counts) inside += c;
  if (inside == 0.0) throw Error(ErrorCode::DegenerateDistribution, "no samples fall inside the sector range");
  for (int n = 0; n < N; ++n) model.B[n] = counts[n] / (inside * width);
  return model;
}

/// Tabulated sector densities for N = 8 against sigma_theta_o in degrees.
struct SectorTable {
  std::vector<double> sigma_deg;
  std::vector<std::array<double, 8>> B;

  static SectorTable builtin() {
    return {{1, 3, 5, 7, 9, 11},
            {{{2.63, 5.74, 10.37, 15.2, 17.8, 14.7, 7.05, 1.26}},
             {{0.85, 1.99, 3.73, 5.49, 6.19, 4.99, 2.45, 0.4}},
             {{0.47, 1.24, 2.42, 3.56, 3.9, 3.03, 1.44, 0.23}},
             {{0.29, 0.91, 1.87, 2.75, 2.94, 2.2, 1.0, 0.15}},
             {{0.19, 0.72, 1.58, 2.3, 2.4, 1.73, 0.76, 0.11}},
             {{0.1, 0.58, 1.42, 2.07, 2.06, 1.42, 0.6, 0.08}}}};
  }
};

inline SectorTable load_sector_table(const std::string& path) {
  SectorTable t;
  for (const auto& r : detail::read_numeric_csv(path, 9)) {
    t.sigma_deg.push_back(r[0]);
    std::array<double, 8> b{};
    std::copy(r.begin() + 1, r.begin() + 9, b.begin());
    t.B.push_back(b);
  }
  return t;
}

/// Sector model from the table, interpolated per entry. Breakpoints use the
/// interpolated mean from the moment table. Densities are used as printed.
inline SectorModel sector_table(double sigma_theta_o, int N = 8, const SectorTable& table = SectorTable::builtin(),
                                const MrrMomentTable& moments = MrrMomentTable::builtin()) {
  if (N != 8) throw Error(ErrorCode::InvalidSpec, "tabulated sector densities exist only for N = 8");
  const double deg = sigma_theta_o / kDegree;
  if (deg < table.sigma_deg.front() - 1e-12 || deg > table.sigma_deg.back() + 1e-12) {
    throw Error(ErrorCode::OutOfRange, "sigma_theta_o outside the sector table range");
  }
  SectorModel model;
  model.V = sector_breakpoints(moments.lookup(sigma_theta_o).mu, N);
  model.B.resize(N);
  std::vector<double> col(table.B.size());
  for (int n = 0; n < N; ++n) {
    for (std::size_t r = 0; r < table.B.size(); ++r) col[r] = table.B[r][n];
    model.B[n] = specfun::interp_table(table.sigma_deg, col, deg);
  }
  return model;
}

}  // namespace mrrfso
