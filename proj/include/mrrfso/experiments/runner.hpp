#pragma once

// Executes an ExperimentSpec. Monte-Carlo work is grouped by channel (every
// config field except P_t, which only rescales the SNR), so a P_t sweep
// draws its samples once. Analytic grid points run concurrently; rows come
// out in grid order either way.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "mrrfso/analytic_strong.hpp"
#include "mrrfso/analytic_weak.hpp"
#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/experiments/spec.hpp"
#include "mrrfso/montecarlo.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/parallel.hpp"

namespace mrrfso::experiments {

/// Everything besides the link itself that selects an analytic model.
struct ModelOptions {
  RegimeChoice regime = RegimeChoice::Auto;
  RegimeRule rule = RegimeRule::Rytov;
  PointingExponent conv = PointingExponent::Printed;
  SectorSource sectors = SectorSource::Fit;
  SimpleForm simple_form = SimpleForm::WithHc;
  int N = 8;
  std::size_t sector_samples = 1000000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  int ber_M = 20;
  double ber_gamma_max = 4.0;
};

inline ModelOptions model_options(const ExperimentSpec& s, unsigned workers = 1) {
  ModelOptions o;
  o.regime = s.regime;
  o.rule = s.regime_rule;
  o.conv = s.pointing_exponent;
  o.sectors = s.sectors;
  o.simple_form = s.simple_form;
  o.N = s.N;
  o.sector_samples = s.sector_samples;
  o.seed = s.seed;
  o.workers = workers;
  o.ber_M = s.ber_M;
  o.ber_gamma_max = s.ber_gamma_max;
  return o;
}

inline Regime resolve_regime(const LinkConfig& cfg, const TurbulenceStats& stats, RegimeChoice choice,
                             RegimeRule rule) {
  if (choice == RegimeChoice::Weak) return Regime::WeakToModerate;
  if (choice == RegimeChoice::Strong) return Regime::ModerateToStrong;
  return rule == RegimeRule::Rytov ? regime_from_rytov(stats.sigma_R2) : regime_from_cn2(cfg.cn2_0);
}

/// Sector models keyed by sigma_theta_o. Thread-safe; fits are serialized.
class SectorCache {
 public:
  const SectorModel& get(double sigma_theta_o, const ModelOptions& o) {
    const std::lock_guard<std::mutex> lock(mu_);
    const auto key = std::bit_cast<std::uint64_t>(sigma_theta_o);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      SectorModel m;
      if (o.sectors == SectorSource::Table) {
        m = sector_table(sigma_theta_o, o.N);
      } else {
        m = fit_sector_model(sample_hmrr(sigma_theta_o, o.sector_samples, o.seed, o.workers), o.N);
      }
      it = cache_.emplace(key, std::move(m)).first;
    }
    return it->second;
  }

 private:
  std::mutex mu_;
  std::map<std::uint64_t, SectorModel> cache_;
};

/// Analytic statistics of one link under the resolved regime.
struct AnalyticModel {
  LinkConfig cfg;
  TurbulenceStats stats;
  Regime regime = Regime::WeakToModerate;
  std::optional<WeakModelConstants> weak;
  std::optional<StrongModelConstants> strong;
  ModelOptions opts;

  bool is_weak() const { return regime == Regime::WeakToModerate; }

  double pdf_h(double h) const { return is_weak() ? pdf_h_weak(h, *weak) : pdf_h_strong(h, *strong); }
  double cdf_h(double h) const { return is_weak() ? cdf_h_weak(h, *weak) : cdf_h_strong(h, *strong); }
  double pdf_snr(double g) const { return is_weak() ? pdf_snr_weak(g, *weak) : pdf_snr_strong(g, *strong); }
  double cdf_snr(double g) const { return is_weak() ? cdf_snr_weak(g, *weak) : cdf_snr_strong(g, *strong); }
  double outage() const { return is_weak() ? outage_weak(*weak, cfg.gamma_th) : outage_strong(*strong, cfg.gamma_th); }
  BerResult ber() const {
    return is_weak() ? ber_weak(*weak, opts.ber_M, opts.ber_gamma_max) : ber_strong(*strong);
  }
  double pdf_h_simple(double h) const {
    if (is_weak()) throw Error(ErrorCode::RegimeMismatch, "simplified closed form exists only for the strong model");
    return pdf_h_strong_simple(h, *strong, opts.simple_form);
  }
};

inline AnalyticModel make_model(const LinkConfig& cfg, const ModelOptions& o, SectorCache& sectors) {
  validate(cfg);
  AnalyticModel m;
  m.cfg = cfg;
  m.opts = o;
  m.stats = turbulence_stats(cfg);
  m.regime = resolve_regime(cfg, m.stats, o.regime, o.rule);
  m.stats.regime = m.regime;
  if (m.is_weak()) {
    m.weak = weak_constants(cfg, mrr_moments(cfg.sigma_theta_o), m.stats, o.conv);
  } else {
    m.strong = strong_constants(cfg, m.stats, sectors.get(cfg.sigma_theta_o, o), o.conv);
  }
  return m;
}

/// Largest h reachable with unit fading and perfect pointing and reflection.
inline double h_scale(const LinkConfig& c) {
  const double w = beamwidth(c);
  return 2.0 * c.A_r * h_c(c) / (std::numbers::pi * w * w);
}

struct Row {
  std::vector<double> series;
  double axis = 0.0;
  Metric metric = Metric::outage;
  Engine engine = Engine::analytic;
  std::string regime;
  double x = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  std::string method;
  std::string flag = "n/a";
  std::string error;
};

struct RunResult {
  ExperimentSpec spec;
  std::vector<Row> rows;
  std::size_t flags = 0;
  std::size_t errors = 0;
};

struct RunOptions {
  unsigned workers = 1;
};

namespace detail {

struct Point {
  std::vector<double> series;
  double axis = 0.0;
  LinkConfig cfg;
  std::string error;
  std::optional<Regime> regime;
};

inline std::vector<Point> enumerate_points(const ExperimentSpec& s) {
  std::vector<std::vector<double>> combos = {{}};
  for (const auto& ax : s.series) {
    std::vector<std::vector<double>> next;
    for (const auto& c : combos) {
      for (double v : ax.values) {
        auto e = c;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    combos = std::move(next);
  }
  std::vector<Point> pts;
  for (const auto& combo : combos) {
    for (double g : s.grid) {
      Point p;
      p.series = combo;
      p.axis = g;
      p.cfg = s.base;
      std::optional<double> pin = s.w_z;
      for (std::size_t i = 0; i < combo.size(); ++i) apply_axis(p.cfg, pin, s.series[i].axis, combo[i]);
      apply_axis(p.cfg, pin, s.sweep_axis, g);
      if (pin.has_value()) p.cfg.theta_div = pin.value_or(0.0) / p.cfg.Z;
      try {
        validate(p.cfg);
        const auto stats = turbulence_stats(p.cfg);
        p.regime = resolve_regime(p.cfg, stats, s.regime, s.regime_rule);
      } catch (const Error& e) {
        p.error = e.what();
      }
      pts.push_back(std::move(p));
    }
  }
  return pts;
}

/// Absolute abscissae for a distribution metric at one point.
inline std::vector<double> abscissae(const ExperimentSpec& s, Metric m, const LinkConfig& c) {
  std::vector<double> rel = s.eval_points;
  const bool hmrr = m == Metric::pdf_hmrr || m == Metric::pdf_hmrr_sector;
  if (rel.empty()) {
    if (hmrr) {
      for (int i = 0; i < 50; ++i) rel.push_back((i + 0.5) / 50.0);
    } else {
      for (int i = 1; i <= 60; ++i) rel.push_back(0.025 * i);
    }
  }
  if (hmrr) return rel;
  const double sh = h_scale(c);
  const double u1 = upsilon1(c);
  for (double& x : rel) {
    const double h = x * sh;
    x = (m == Metric::pdf_snr || m == Metric::cdf_snr) ? u1 * h * h : h;
  }
  return rel;
}

/// Histogram cells around each abscissa: edges at the midpoints.
inline std::vector<double> cell_edges(const std::vector<double>& x) {
  std::vector<double> e(x.size() + 1);
  if (x.size() == 1) {
    e[0] = 0.5 * x[0];
    e[1] = 1.5 * x[0];
    return e;
  }
  for (std::size_t i = 1; i < x.size(); ++i) e[i] = 0.5 * (x[i - 1] + x[i]);
  e.front() = std::max(0.0, x.front() - (e[1] - x.front()));
  e.back() = x.back() + (x.back() - e[x.size() - 1]);
  return e;
}

/// Channel identity for the Monte-Carlo cache: every field that changes h.
inline std::vector<std::uint64_t> channel_key(const LinkConfig& c, Regime r) {
  auto b = [](double v) { return std::bit_cast<std::uint64_t>(v); };
  return {b(c.Z),           b(c.Z_hg),          b(c.Z_hu),        b(c.lambda),       b(c.theta_div),
          b(c.r_g),         b(c.A_r),            b(c.sigma_theta_e), b(c.sigma_theta_o), b(c.zeta.value_or(-1.0)),
          b(c.h_l.value_or(-1.0)), b(c.cn2_0),   b(c.wind_v),      static_cast<std::uint64_t>(r)};
}

struct Cell {
  double value = std::numeric_limits<double>::quiet_NaN();
  double lo = std::numeric_limits<double>::quiet_NaN();
  double hi = std::numeric_limits<double>::quiet_NaN();
  std::string method;
  std::string error;
};

// Cells per point, indexed [metric][abscissa].
using PointCells = std::vector<std::vector<Cell>>;

inline std::size_t count_le(const std::vector<double>& sorted, double v) {
  return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

inline std::size_t count_lt(const std::vector<double>& sorted, double v) {
  return static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin());
}

inline Cell density_cell(const std::vector<double>& sorted, double lo, double hi) {
  const std::size_t n = sorted.size();
  const std::size_t k = count_lt(sorted, hi) - count_lt(sorted, lo);
  const Estimate e = binomial_estimate(k, n);
  const double w = hi - lo;
  return {e.value / w, e.lo / w, e.hi / w, "histogram", ""};
}

inline Cell probability_cell(const std::vector<double>& sorted, double v) {
  const Estimate e = binomial_estimate(count_le(sorted, v), sorted.size());
  return {e.value, e.lo, e.hi, "ecdf", ""};
}

/// Monte-Carlo cells for every point that shares one sample set of h.
inline void mc_fill(const ExperimentSpec& s, const Point& p, std::vector<double>& sorted_h,
                    const std::vector<double>& sorted_hmrr, PointCells& out) {
  const double u1 = upsilon1(p.cfg);
  for (std::size_t mi = 0; mi < s.metrics.size(); ++mi) {
    const Metric m = s.metrics[mi];
    auto& cells = out[mi];
    if (m == Metric::outage) {
      // gamma < gamma_th  <=>  h < sqrt(gamma_th / Upsilon1)
      const Estimate e = binomial_estimate(count_lt(sorted_h, std::sqrt(p.cfg.gamma_th / u1)), sorted_h.size());
      cells[0] = {e.value, e.lo, e.hi, "count", ""};
    } else if (m == Metric::ber) {
      std::vector<double> g(sorted_h.size());
      for (std::size_t i = 0; i < g.size(); ++i) g[i] = u1 * sorted_h[i] * sorted_h[i];
      const Estimate e = mc_ber(g);
      cells[0] = {e.value, e.lo, e.hi, "mean", ""};
    } else {
      const auto x = abscissae(s, m, p.cfg);
      const bool hmrr = m == Metric::pdf_hmrr || m == Metric::pdf_hmrr_sector;
      const auto& src = hmrr ? sorted_hmrr : sorted_h;
      const bool snr = m == Metric::pdf_snr || m == Metric::cdf_snr;
      // SNR statistics are those of h at h = sqrt(gamma / Upsilon1).
      auto to_h = [&](double v) { return snr ? std::sqrt(v / u1) : v; };
      if (m == Metric::cdf_h || m == Metric::cdf_snr) {
        for (std::size_t j = 0; j < x.size(); ++j) cells[j] = probability_cell(src, to_h(x[j]));
      } else {
        const auto e = cell_edges(x);
        for (std::size_t j = 0; j < x.size(); ++j) {
          Cell c = density_cell(src, to_h(e[j]), to_h(e[j + 1]));
          const double scale = (to_h(e[j + 1]) - to_h(e[j])) / (e[j + 1] - e[j]);
          c.value *= scale;
          c.lo *= scale;
          c.hi *= scale;
          cells[j] = c;
        }
      }
    }
  }
}

inline void analytic_fill(const ExperimentSpec& s, const Point& p, const ModelOptions& o, SectorCache& sectors,
                          PointCells& out) {
  std::optional<AnalyticModel> model;
  std::string model_error;
  try {
    model = make_model(p.cfg, o, sectors);
  } catch (const Error& e) {
    model_error = e.what();
  }
  for (std::size_t mi = 0; mi < s.metrics.size(); ++mi) {
    const Metric m = s.metrics[mi];
    auto& cells = out[mi];
    const bool scalar = !is_distribution(m);
    const auto x = scalar ? std::vector<double>{0.0} : abscissae(s, m, p.cfg);
    for (std::size_t j = 0; j < x.size(); ++j) {
      Cell& c = cells[j];
      try {
        switch (m) {
          case Metric::pdf_hmrr: {
            const MrrMoments mm = mrr_moments(p.cfg.sigma_theta_o);
            c.value = lognormal_hmrr_pdf(x[j], mm.mu, mm.sd);
            c.method = "lognormal";
            continue;
          }
          case Metric::pdf_hmrr_sector:
            c.value = sectors.get(p.cfg.sigma_theta_o, o).pdf(x[j]);
            c.method = "sector";
            continue;
          default: break;
        }
        if (!model) throw Error(ErrorCode::InvalidSpec, model_error);
        switch (m) {
          case Metric::pdf_h: c.value = model->pdf_h(x[j]); break;
          case Metric::cdf_h: c.value = model->cdf_h(x[j]); break;
          case Metric::pdf_snr: c.value = model->pdf_snr(x[j]); break;
          case Metric::cdf_snr: c.value = model->cdf_snr(x[j]); break;
          case Metric::outage: c.value = model->outage(); break;
          case Metric::pdf_h_simple: c.value = model->pdf_h_simple(x[j]); break;
          case Metric::ber: {
            const BerResult r = model->ber();
            c.value = r.value;
            c.method = r.method == BerMethod::ClosedForm ? "closed_form" : "quadrature";
            break;
          }
          default: break;
        }
        if (c.method.empty()) c.method = "closed_form";
      } catch (const Error& e) {
        c.error = model_error.empty() ? e.what() : model_error;
      }
    }
  }
}

/// Tolerance check of an analytic value against a Monte-Carlo cell. The
/// analytic value passes when it lies in the MC confidence interval widened
/// by the metric's tolerance. Returns "ok", "FLAG" or "n/a".
inline std::string tolerance_flag(Metric m, Regime r, const Cell& a, const Cell& mc) {
  if (!a.error.empty() || !mc.error.empty() || !std::isfinite(a.value) || !std::isfinite(mc.value)) return "n/a";
  double rel = 0.0;
  double abs_tol = 0.0;
  switch (m) {
    case Metric::outage:
      if (mc.value < 1e-4) return "n/a";
      rel = 0.10;
      break;
    case Metric::ber:
      if (mc.value < 1e-7) return "n/a";
      rel = r == Regime::WeakToModerate ? 0.05 : 0.10;
      break;
    case Metric::cdf_h:
    case Metric::cdf_snr: abs_tol = 0.02; break;
    default: return "n/a";
  }
  const double lo = mc.lo * (1.0 - rel) - abs_tol;
  const double hi = mc.hi * (1.0 + rel) + abs_tol;
  return a.value >= lo && a.value <= hi ? "ok" : "FLAG";
}

}  // namespace detail

inline RunResult run_experiment(const ExperimentSpec& spec, const RunOptions& ro = {}) {
  validate(spec);
  RunResult res;
  res.spec = spec;
  const ModelOptions opts = model_options(spec, ro.workers);
  const auto points = detail::enumerate_points(spec);
  const std::size_t nm = spec.metrics.size();

  auto blank = [&](const detail::Point& p) {
    detail::PointCells cells(nm);
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const std::size_t n = is_distribution(spec.metrics[mi]) ? detail::abscissae(spec, spec.metrics[mi], p.cfg).size() : 1;
      cells[mi].resize(n);
    }
    return cells;
  };

  bool want_mc = false;
  bool want_an = false;
  for (Engine e : spec.engines) (e == Engine::montecarlo ? want_mc : want_an) = true;

  std::vector<detail::PointCells> an(points.size());
  std::vector<detail::PointCells> mc(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].error.empty()) continue;
    an[i] = blank(points[i]);
    mc[i] = blank(points[i]);
  }

  SectorCache sectors;
  if (want_an) {
    // Fit sector models up front so the concurrent phase only reads them.
    for (const auto& p : points) {
      if (!p.error.empty()) continue;
      bool needs = false;
      for (Metric m : spec.metrics) {
        needs |= m == Metric::pdf_hmrr_sector || (*p.regime == Regime::ModerateToStrong && m != Metric::pdf_hmrr);
      }
      if (!needs) continue;
      try {
        sectors.get(p.cfg.sigma_theta_o, opts);
      } catch (const Error&) {
        // Recorded per row in the analytic phase.
      }
    }
    // Sector fits inside the parallel region would nest parallel_for.
    ModelOptions inner = opts;
    inner.workers = 1;
    parallel_for(points.size(), ro.workers, [&](std::size_t i) {
      if (points[i].error.empty()) detail::analytic_fill(spec, points[i], inner, sectors, an[i]);
    });
  }

  if (want_mc) {
    bool needs_h = false;
    bool needs_hmrr = false;
    for (Metric m : spec.metrics) {
      (m == Metric::pdf_hmrr || m == Metric::pdf_hmrr_sector ? needs_hmrr : needs_h) = true;
    }
    std::vector<bool> done(points.size(), false);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (done[i] || !points[i].error.empty()) continue;
      const auto key = detail::channel_key(points[i].cfg, *points[i].regime);
      std::vector<double> h;
      std::vector<double> hm;
      std::string err;
      try {
        if (needs_h) {
          SimPlan plan;
          plan.cfg = points[i].cfg;
          plan.n_samples = spec.samples;
          plan.seed = spec.seed;
          plan.workers = ro.workers;
          plan.pointing = spec.pointing;
          plan.fading = *points[i].regime == Regime::WeakToModerate ? FadingModel::LogNormal : FadingModel::GammaGamma;
          h = channel_h(sample_channel(plan));
          std::sort(h.begin(), h.end());
        }
        if (needs_hmrr) {
          hm = sample_hmrr(points[i].cfg.sigma_theta_o, spec.samples, spec.seed, ro.workers);
          std::sort(hm.begin(), hm.end());
        }
      } catch (const Error& e) {
        err = e.what();
      }
      for (std::size_t j = i; j < points.size(); ++j) {
        if (done[j] || !points[j].error.empty()) continue;
        if (detail::channel_key(points[j].cfg, *points[j].regime) != key) continue;
        done[j] = true;
        if (err.empty()) {
          detail::mc_fill(spec, points[j], h, hm, mc[j]);
        } else {
          for (auto& v : mc[j]) {
            for (auto& c : v) c.error = err;
          }
        }
      }
    }
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    const std::string regime = p.regime ? (*p.regime == Regime::WeakToModerate ? "weak" : "strong") : "";
    for (std::size_t mi = 0; mi < nm; ++mi) {
      const Metric m = spec.metrics[mi];
      if (!p.error.empty()) {
        for (Engine e : spec.engines) {
          Row r;
          r.series = p.series;
          r.axis = p.axis;
          r.metric = m;
          r.engine = e;
          r.error = p.error;
          r.flag = "error";
          res.rows.push_back(std::move(r));
        }
        continue;
      }
      const auto xs = is_distribution(m) ? detail::abscissae(spec, m, p.cfg) : std::vector<double>{};
      for (std::size_t j = 0; j < an[i][mi].size(); ++j) {
        const std::string flag =
            want_an && want_mc ? detail::tolerance_flag(m, *p.regime, an[i][mi][j], mc[i][mi][j]) : "n/a";
        for (Engine e : spec.engines) {
          const detail::Cell& c = e == Engine::analytic ? an[i][mi][j] : mc[i][mi][j];
          Row r;
          r.series = p.series;
          r.axis = p.axis;
          r.metric = m;
          r.engine = e;
          r.regime = regime;
          if (!xs.empty()) r.x = xs[j];
          r.value = c.value;
          r.lo = c.lo;
          r.hi = c.hi;
          r.method = c.method;
          r.error = c.error;
          r.flag = c.error.empty() ? flag : "error";
          res.rows.push_back(std::move(r));
        }
      }
    }
  }
  for (const auto& r : res.rows) {
    // A flagged pair appears once per engine; count the analytic side.
    if (r.flag == "FLAG" && r.engine == Engine::analytic) ++res.flags;
    if (!r.error.empty()) ++res.errors;
  }
  return res;
}

}  // namespace mrrfso::experiments
