#pragma once

// Monte Carlo simulation of the double-pass channel. Sample i is a pure
// function of (seed, i), statistics are accumulated over fixed-size blocks
// and merged in block order, so every result is independent of the worker
// count and of the scheduling chunk.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/parallel.hpp"
#include "mrrfso/random.hpp"
#include "mrrfso/specfun.hpp"

namespace mrrfso {

enum class FadingModel { LogNormal, GammaGamma };
enum class PointingModel { ExactSine, RayleighApprox };

struct SimPlan {
  LinkConfig cfg;
  std::size_t n_samples = 1000000;
  std::uint64_t seed = 1;
  std::size_t chunk = 1 << 16;  // samples per scheduled task
  FadingModel fading = FadingModel::LogNormal;
  PointingModel pointing = PointingModel::ExactSine;
  unsigned workers = 1;
  // Turbulence statistics; derived from cfg when empty.
  std::optional<TurbulenceStats> stats;
};

struct ChannelSample {
  double h = 0.0;
  double gamma = 0.0;
};

namespace detail {

constexpr std::size_t kStatBlock = 4096;

inline void validate(const SimPlan& p) {
  if (p.n_samples < 1) throw Error(ErrorCode::InvalidSpec, "n_samples must be at least 1");
  if (p.chunk < 1) throw Error(ErrorCode::InvalidSpec, "chunk must be at least 1");
  validate(p.cfg);
}

inline double draw_fading(const SimPlan& p, const TurbulenceStats& s, std::uint64_t i, std::uint32_t id) {
  PhiloxStream rng(p.seed, i, id);
  if (p.fading == FadingModel::LogNormal) {
    if (s.sigma_L2 <= 0.0) return 1.0;
    std::normal_distribution<double> x(-2.0 * s.sigma_L2, 2.0 * std::sqrt(s.sigma_L2));
    return std::exp(x(rng));
  }
  std::gamma_distribution<double> ga(s.alpha, 1.0 / s.alpha);
  std::gamma_distribution<double> gb(s.beta, 1.0 / s.beta);
  const double x = ga(rng);
  return x * gb(rng);
}

}  // namespace detail

/// Deterministic generator of channel samples for one plan.
class ChannelSampler {
 public:
  explicit ChannelSampler(const SimPlan& plan) : plan_(plan) {
    detail::validate(plan_);
    stats_ = plan_.stats ? *plan_.stats : turbulence_stats(plan_.cfg);
    if (plan_.fading == FadingModel::GammaGamma && !(stats_.alpha > 0.0 && stats_.beta > 0.0)) {
      throw Error(ErrorCode::DomainError, "Gamma-Gamma fading needs positive alpha and beta");
    }
    const double hl = beer_lambert(plan_.cfg);
    fixed_ = hl * hl * geometric_loss_gs(plan_.cfg);
    upsilon1_ = upsilon1(plan_.cfg);
  }

  const TurbulenceStats& stats() const { return stats_; }

  ChannelSample operator()(std::uint64_t i) const {
    const LinkConfig& c = plan_.cfg;
    double dx = 0.0;
    double dy = 0.0;
    if (c.sigma_theta_e > 0.0) {
      PhiloxStream rng(plan_.seed, i, stream::kPointing);
      std::normal_distribution<double> th(0.0, c.sigma_theta_e);
      const double tx = th(rng);
      const double ty = th(rng);
      if (plan_.pointing == PointingModel::ExactSine) {
        dx = c.Z * std::sin(tx);
        dy = c.Z * std::sin(ty);
      } else {
        dx = c.Z * tx;
        dy = c.Z * ty;
      }
    }
    const double h_pu = pointing_loss_approx(c, dx, dy);
    const double h_mrr = draw_hmrr(c.sigma_theta_o, plan_.seed, i);
    const double h_a = detail::draw_fading(plan_, stats_, i, stream::kFadingUp) *
                       detail::draw_fading(plan_, stats_, i, stream::kFadingDown);
    ChannelSample s;
    s.h = fixed_ * h_a * h_pu * h_mrr;
    s.gamma = upsilon1_ * s.h * s.h;
    return s;
  }

 private:
  SimPlan plan_;
  TurbulenceStats stats_;
  double fixed_ = 0.0;
  double upsilon1_ = 0.0;
};

/// Block-ordered reduction over all samples of a plan. `add` folds one
/// sample into a block accumulator, `merge` folds block results in order.
template <class Acc, class Add, class Merge>
Acc reduce_channel(const SimPlan& plan, const Acc& init, Add&& add, Merge&& merge) {
  const ChannelSampler sampler(plan);
  const std::size_t n = plan.n_samples;
  const std::size_t blocks = (n + detail::kStatBlock - 1) / detail::kStatBlock;
  const std::size_t per_task = std::max<std::size_t>(1, plan.chunk / detail::kStatBlock);
  const std::size_t tasks = (blocks + per_task - 1) / per_task;
  std::vector<Acc> partial(blocks, init);
  parallel_for(tasks, plan.workers, [&](std::size_t t) {
    const std::size_t b_end = std::min(blocks, (t + 1) * per_task);
    for (std::size_t b = t * per_task; b < b_end; ++b) {
      const std::size_t end = std::min(n, (b + 1) * detail::kStatBlock);
      for (std::size_t i = b * detail::kStatBlock; i < end; ++i) add(partial[b], sampler(i));
    }
  });
  Acc total = init;
  for (const Acc& a : partial) merge(total, a);
  return total;
}

inline std::vector<ChannelSample> sample_channel(const SimPlan& plan) {
  const ChannelSampler sampler(plan);
  std::vector<ChannelSample> out(plan.n_samples);
  const std::size_t tasks = (plan.n_samples + plan.chunk - 1) / plan.chunk;
  parallel_for(tasks, plan.workers, [&](std::size_t t) {
    const std::size_t end = std::min(plan.n_samples, (t + 1) * plan.chunk);
    for (std::size_t i = t * plan.chunk; i < end; ++i) out[i] = sampler(i);
  });
  return out;
}

inline std::vector<double> channel_h(const std::vector<ChannelSample>& s) {
  std::vector<double> h(s.size());
  std::transform(s.begin(), s.end(), h.begin(), [](const ChannelSample& x) { return x.h; });
  return h;
}

inline std::vector<double> channel_gamma(const std::vector<ChannelSample>& s) {
  std::vector<double> g(s.size());
  std::transform(s.begin(), s.end(), g.begin(), [](const ChannelSample& x) { return x.gamma; });
  return g;
}

/// A Monte Carlo estimate with a 95% confidence interval.
struct Estimate {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Wilson score interval for k successes out of n.
inline Estimate binomial_estimate(std::size_t k, std::size_t n) {
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double denom = 1.0 + z * z / nn;
  const double centre = (p + z * z / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  // centre - half is exactly 0 at k = 0 (and 1 at k = n) up to rounding.
  const double lo = k == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = k == n ? 1.0 : std::min(1.0, centre + half);
  return {p, lo, hi, n};
}

/// Normal-theory interval for a mean from its running sums.
inline Estimate mean_estimate(double sum, double sum_sq, std::size_t n) {
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = n > 1 ? std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
  const double half = z * std::sqrt(var / nn);
  return {mean, std::max(0.0, mean - half), mean + half, n};
}

/// Fraction of samples with gamma below each threshold, one pass.
inline std::vector<Estimate> mc_outage(const SimPlan& plan, const std::vector<double>& thresholds) {
  using Counts = std::vector<std::size_t>;
  const Counts counts = reduce_channel(
      plan, Counts(thresholds.size(), 0),
      [&](Counts& acc, const ChannelSample& s) {
        for (std::size_t j = 0; j < thresholds.size(); ++j) acc[j] += s.gamma < thresholds[j] ? 1 : 0;
      },
      [](Counts& total, const Counts& part) {
        for (std::size_t j = 0; j < total.size(); ++j) total[j] += part[j];
      });
  std::vector<Estimate> out;
  for (std::size_t c : counts) out.push_back(binomial_estimate(c, plan.n_samples));
  return out;
}

inline Estimate mc_outage(const SimPlan& plan, double gamma_th) {
  if (gamma_th <= 0.0) return {0.0, 0.0, 0.0, plan.n_samples};
  if (std::isinf(gamma_th)) return {1.0, 1.0, 1.0, plan.n_samples};
  return mc_outage(plan, std::vector<double>{gamma_th}).front();
}

/// OOK BER as the sample mean of Q(sqrt(gamma)).
inline Estimate mc_ber(const SimPlan& plan) {
  struct Sums {
    double s = 0.0;
    double s2 = 0.0;
  };
  const Sums tot = reduce_channel(
      plan, Sums{},
      [](Sums& a, const ChannelSample& x) {
        const double q = specfun::q_function(std::sqrt(x.gamma));
        a.s += q;
        a.s2 += q * q;
      },
      [](Sums& a, const Sums& b) {
        a.s += b.s;
        a.s2 += b.s2;
      });
  return mean_estimate(tot.s, tot.s2, plan.n_samples);
}

/// Mean of Q(sqrt(gamma)) over an already drawn sample set.
inline Estimate mc_ber(const std::vector<double>& gammas) {
  double s = 0.0;
  double s2 = 0.0;
  for (double g : gammas) {
    const double q = specfun::q_function(std::sqrt(g));
    s += q;
    s2 += q * q;
  }
  return mean_estimate(s, s2, gammas.size());
}

/// Histogram with explicit edges. Values equal to the last edge fall in the
/// last bin; values outside the edges are counted in `outside`.
struct EmpiricalDistribution {
  std::vector<double> bin_edges;
  std::vector<std::size_t> counts;
  std::size_t n = 0;
  std::size_t outside = 0;

  double density(std::size_t i) const {
    return static_cast<double>(counts[i]) / (static_cast<double>(n) * (bin_edges[i + 1] - bin_edges[i]));
  }
  double probability(std::size_t i) const { return static_cast<double>(counts[i]) / static_cast<double>(n); }
};

inline EmpiricalDistribution empirical_pdf(const std::vector<double>& samples, std::vector<double> edges) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw Error(ErrorCode::DomainError, "histogram edges must be sorted with at least two entries");
  }
  EmpiricalDistribution d;
  d.bin_edges = std::move(edges);
  d.counts.assign(d.bin_edges.size() - 1, 0);
  d.n = samples.size();
  for (double x : samples) {
    if (x < d.bin_edges.front() || x > d.bin_edges.back()) {
      ++d.outside;
      continue;
    }
    auto it = std::upper_bound(d.bin_edges.begin(), d.bin_edges.end(), x);
    std::size_t k = static_cast<std::size_t>(it - d.bin_edges.begin());
    k = std::min(k, d.bin_edges.size() - 1) - 1;
    ++d.counts[k];
  }
  return d;
}

/// Equal-width histogram over [min, max] of the samples. A constant sample
/// set yields a single bin.
inline EmpiricalDistribution empirical_pdf(const std::vector<double>& samples, std::size_t bins) {
  if (samples.empty()) throw Error(ErrorCode::InsufficientSamples, "empirical_pdf needs samples");
  if (bins < 1) throw Error(ErrorCode::DomainError, "empirical_pdf needs at least one bin");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (*mn == *mx) {
    const double pad = *mn == 0.0 ? 0.5 : 0.5 * std::abs(*mn);
    return empirical_pdf(samples, std::vector<double>{*mn - pad, *mx + pad});
  }
  std::vector<double> edges(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) edges[i] = *mn + (*mx - *mn) * static_cast<double>(i) / bins;
  edges.back() = *mx;
  return empirical_pdf(samples, std::move(edges));
}

/// Right-continuous empirical CDF.
class EmpiricalCdf {
 public:
  explicit EmpiricalCdf(std::vector<double> samples) : x_(std::move(samples)) {
    if (x_.empty()) throw Error(ErrorCode::InsufficientSamples, "empirical_cdf needs samples");
    std::sort(x_.begin(), x_.end());
  }
  double operator()(double v) const {
    return static_cast<double>(std::upper_bound(x_.begin(), x_.end(), v) - x_.begin()) /
           static_cast<double>(x_.size());
  }
  /// Left limit P(X < v).
  double below(double v) const {
    return static_cast<double>(std::lower_bound(x_.begin(), x_.end(), v) - x_.begin()) /
           static_cast<double>(x_.size());
  }
  double quantile(double p) const {
    const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(x_.size() - 1);
    return x_[static_cast<std::size_t>(pos)];
  }
  const std::vector<double>& sorted() const { return x_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
};

inline EmpiricalCdf empirical_cdf(std::vector<double> samples) { return EmpiricalCdf(std::move(samples)); }

/// Kolmogorov-Smirnov distance against a model CDF, evaluated at every
/// sample (exact sup for a continuous model).
template <class Cdf>
double ks_distance(const EmpiricalCdf& ecdf, Cdf&& model) {
  const auto& x = ecdf.sorted();
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = model(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
  }
  return d;
}

/// KS distance restricted to `points` empirical quantiles, for models whose
/// CDF is too expensive to evaluate at every sample. A lower bound on the
/// full distance that converges to it as `points` grows.
template <class Cdf>
double ks_distance_sampled(const EmpiricalCdf& ecdf, Cdf&& model, std::size_t points) {
  double d = 0.0;
  for (std::size_t j = 1; j < points; ++j) {
    const double x = ecdf.quantile(static_cast<double>(j) / points);
    const double f = model(x);
    d = std::max({d, std::abs(f - ecdf(x)), std::abs(f - ecdf.below(x))});
  }
  return d;
}

/// L1 distance between the binned model mass and the histogram mass, with
/// probability outside the histogram range counted in full.
template <class Cdf>
double binned_l1(const EmpiricalDistribution& hist, Cdf&& model_cdf) {
  double l1 = 0.0;
  double inside_model = 0.0;
  double prev = model_cdf(hist.bin_edges.front());
  for (std::size_t i = 0; i < hist.counts.size(); ++i) {
    const double next = model_cdf(hist.bin_edges[i + 1]);
    l1 += std::abs((next - prev) - hist.probability(i));
    inside_model += next - prev;
    prev = next;
  }
  const double outside_emp = static_cast<double>(hist.outside) / static_cast<double>(hist.n);
  return l1 + std::abs((1.0 - inside_model) - outside_emp);
}

}  // namespace mrrfso
