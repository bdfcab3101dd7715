#pragma once

// Channel and SNR statistics under weak-to-moderate turbulence, where the
// product of the two log-normal fades and the log-normal h_MRR surrogate
// collapses to one log-normal factor h_L with ln h_L ~ N(-C2, C1).

#include <cmath>
#include <limits>
#include <numbers>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/quadrature.hpp"
#include "mrrfso/specfun.hpp"

namespace mrrfso {

struct WeakModelConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double C3 = 0.0;
  double log_C4 = 0.0;  // C4 itself overflows for large K
  double C5 = 0.0;
  double K = 0.0;
  double h_c = 0.0;
  double Upsilon1 = 0.0;
  double sigma_L2 = 0.0;

  double C4() const { return std::exp(log_C4); }
};

inline WeakModelConstants weak_constants(const LinkConfig& cfg, const MrrMoments& moments,
                                         const TurbulenceStats& stats,
                                         PointingExponent conv = PointingExponent::Printed,
                                         bool check_regime = true) {
  if (check_regime && stats.regime != Regime::WeakToModerate) {
    throw Error(ErrorCode::RegimeMismatch, "weak-turbulence model requested for sigma_R2 >= 1");
  }
  const double mu = moments.mu;
  const double sd = moments.sd;
  WeakModelConstants k;
  k.sigma_L2 = stats.sigma_L2;
  k.C1 = std::log1p(sd * sd / (mu * mu)) + 8.0 * stats.sigma_L2;
  if (!(k.C1 > 0.0)) {
    throw Error(ErrorCode::DegenerateDistribution, "C1 = 0: neither h_MRR nor the fading is random");
  }
  k.C2 = std::log(std::sqrt(mu * mu + sd * sd) / (mu * mu)) + 4.0 * stats.sigma_L2;
  const double w = beamwidth(cfg);
  k.h_c = h_c(cfg);
  k.C3 = std::numbers::pi * w * w / (2.0 * cfg.A_r * k.h_c);
  k.K = pointing_exponent(cfg, conv);
  k.log_C4 = std::log(k.K) + k.K * std::log(k.C3) + 0.5 * (k.C1 * k.K * k.K + 2.0 * k.K * k.C2);
  k.C5 = std::log(k.C3) + k.C1 * k.K + k.C2;
  k.Upsilon1 = upsilon1(cfg);
  return k;
}

inline double log_pdf_h_weak(double h, const WeakModelConstants& k) {
  const double lh = std::log(h);
  return k.log_C4 + (k.K - 1.0) * lh + specfun::log_q_function((lh + k.C5) / std::sqrt(k.C1));
}

inline double pdf_h_weak(double h, const WeakModelConstants& k) {
  if (!(h > 0.0)) return 0.0;
  return std::exp(log_pdf_h_weak(h, k));
}

inline double cdf_h_weak(double h, const WeakModelConstants& k) {
  if (!(h > 0.0)) return 0.0;
  if (std::isinf(h)) return 1.0;
  const double lh = std::log(h);
  const double sq = std::sqrt(k.C1);
  // P(h_L <= C3 h) plus the part where the pointing factor does the cutting.
  const double body = specfun::q_function(-(lh + std::log(k.C3) + k.C2) / sq);
  const double tail = std::exp(k.log_C4 - std::log(k.K) + k.K * lh + specfun::log_q_function((lh + k.C5) / sq));
  return std::min(1.0, body + tail);
}

inline double pdf_snr_weak(double gamma, const WeakModelConstants& k) {
  if (!(gamma > 0.0)) return 0.0;
  const double h = std::sqrt(gamma / k.Upsilon1);
  return pdf_h_weak(h, k) / (2.0 * std::sqrt(gamma * k.Upsilon1));
}

inline double cdf_snr_weak(double gamma, const WeakModelConstants& k) {
  if (!(gamma > 0.0)) return 0.0;
  return cdf_h_weak(std::sqrt(gamma / k.Upsilon1), k);
}

inline double outage_weak(const WeakModelConstants& k, double gamma_th) { return cdf_snr_weak(gamma_th, k); }

enum class BerMethod { ClosedForm, Quadrature };

struct BerResult {
  double value = 0.0;
  BerMethod method = BerMethod::ClosedForm;
};

namespace detail {

/// Log-space integration window for E[g(h)] under the weak channel density.
inline std::pair<double, double> weak_log_window(const WeakModelConstants& k, double upper_cut) {
  const double sq = std::sqrt(k.C1);
  // Above hi the Q factor of the density is below 1e-300.
  double hi = -k.C5 + 37.5 * sq;
  hi = std::min(hi, upper_cut);
  // Below lo the h^K factor has dropped by e^-700 relative to hi.
  const double lo = hi - 700.0 / k.K - 40.0 * sq;
  return {lo, hi};
}

}  // namespace detail

/// Average OOK BER by direct quadrature of E[Q(sqrt(Upsilon1) h)].
inline double ber_weak_quadrature(const WeakModelConstants& k) {
  const double s = std::sqrt(k.Upsilon1);
  // Q(40) is already below 1e-300.
  auto [lo, hi] = detail::weak_log_window(k, std::log(40.0 / s));
  auto f = [&](double u) {
    const double h = std::exp(u);
    return std::exp(log_pdf_h_weak(h, k) + u + specfun::log_q_function(s * h));
  };
  std::vector<double> breaks;
  constexpr int kPieces = 64;
  for (int i = 0; i <= kPieces; ++i) breaks.push_back(lo + (hi - lo) * i / kPieces);
  const double rough = quad::integrate_pieces(f, breaks, 0.0, 1e-6, 8).value;
  return quad::integrate_pieces(f, breaks, 1e-12 * rough, 1e-10, 24).value;
}

/// Truncated erfc-series BER with M + 1 series terms and upper SNR limit
/// gamma_max. Falls back to quadrature when any term leaves double range.
inline BerResult ber_weak(const WeakModelConstants& k, int M = 20, double gamma_max = 4.0,
                          bool allow_fallback = true) {
  const double a = 1.0 / (2.0 * std::sqrt(2.0 * k.C1));
  const double shift = std::log(k.Upsilon1) - 2.0 * k.C5;
  const double L3 = std::log(gamma_max) - shift;
  const double log_L1 = k.log_C4 - std::log(4.0) - 0.5 * k.K * std::log(k.Upsilon1);
  const double log_L2 = -std::numbers::ln2 + 0.5 * k.K * shift;

  // log of (1/beta) [e^{beta L3} erfc(a L3) + e^{beta^2/(4a^2)} erfc(beta/(2a) - a L3)]
  auto log_I = [&](double beta) {
    const double t1 = beta * L3 + specfun::log_erfc(a * L3);
    const double t2 = beta * beta / (4.0 * a * a) + specfun::log_erfc(beta / (2.0 * a) - a * L3);
    const double mx = std::max(t1, t2);
    return -std::log(beta) + mx + std::log(std::exp(t1 - mx) + std::exp(t2 - mx));
  };

  double sum = std::exp(log_L1 + log_L2 + log_I(0.5 * k.K));
  double abs_sum = sum;
  bool finite = std::isfinite(sum);
  double log_fact = 0.0;
  for (int m = 0; m <= M && finite; ++m) {
    if (m > 0) log_fact += std::log(static_cast<double>(m));
    const double log_L1m = -log_fact - 0.5 * std::log(std::numbers::pi) - std::log(2.0 * m + 1.0) -
                           (m - 0.5) * std::numbers::ln2 + 0.5 * (2.0 * m + 1.0) * shift;
    const double bm = 0.5 * (k.K + 2.0 * m + 1.0);
    const double term = std::exp(log_L1 + log_L2 + log_L1m + log_I(bm));
    finite = std::isfinite(term);
    sum += (m % 2 == 0 ? -1.0 : 1.0) * term;
    abs_sum += term;
  }
  // Lost all significant digits to the alternating series, or overflowed.
  const bool unusable = !finite || !std::isfinite(sum) || sum <= 1e-13 * abs_sum;
  if (unusable) {
    if (!allow_fallback) {
      throw Error(ErrorCode::NumericalOverflow, "erfc series out of range; reduce M or gamma_max");
    }
    return {ber_weak_quadrature(k), BerMethod::Quadrature};
  }
  return {sum, BerMethod::ClosedForm};
}

}  // namespace mrrfso
