#pragma once

// Channel and SNR statistics under moderate-to-strong (Gamma-Gamma)
// turbulence with a sectorized h_MRR density. Every closed form is a sum of
// Meijer-G differences over the sectors.

#include <cmath>
#include <numbers>
#include <vector>

#include "mrrfso/analytic_weak.hpp"
#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/meijer_g.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/quadrature.hpp"
#include "mrrfso/specfun.hpp"

namespace mrrfso {

struct StrongModelConstants {
  double alpha = 0.0;
  double beta = 0.0;
  double K = 0.0;
  double h_c = 0.0;
  double Upsilon1 = 0.0;
  double w_z = 0.0;
  double A_r = 0.0;
  SectorModel sectors;
  double B_s = 0.0;
  std::vector<double> Bn_prime;   // uses V_{n+1}
  std::vector<double> Bn_dprime;  // uses V_n
  MeijerGOptions meijer;
};

/// Scale pi w_z^2 alpha^2 beta^2 / (2 A_r) shared by all arguments.
inline double strong_scale(const StrongModelConstants& k) {
  return std::numbers::pi * k.w_z * k.w_z * k.alpha * k.alpha * k.beta * k.beta / (2.0 * k.A_r);
}

inline StrongModelConstants strong_constants(const LinkConfig& cfg, const TurbulenceStats& stats,
                                             const SectorModel& sectors,
                                             PointingExponent conv = PointingExponent::Printed,
                                             bool check_regime = true) {
  if (check_regime && stats.regime != Regime::ModerateToStrong) {
    throw Error(ErrorCode::RegimeMismatch, "strong-turbulence model requested for sigma_R2 < 1");
  }
  if (!(stats.alpha > 0.0 && stats.beta > 0.0)) {
    throw Error(ErrorCode::DomainError, "Gamma-Gamma parameters must be positive");
  }
  if (sectors.V.size() != sectors.B.size() + 1 || sectors.B.empty()) {
    throw Error(ErrorCode::MismatchedLengths, "sector model needs N + 1 breakpoints for N densities");
  }
  if (!(sectors.V.front() > 0.0)) {
    throw Error(ErrorCode::NonPositiveBreakpoint, "lowest sector breakpoint must be positive (mu_MRR > 0.5)");
  }
  StrongModelConstants k;
  k.alpha = stats.alpha;
  k.beta = stats.beta;
  k.K = pointing_exponent(cfg, conv);
  k.h_c = h_c(cfg);
  k.Upsilon1 = upsilon1(cfg);
  k.w_z = beamwidth(cfg);
  k.A_r = cfg.A_r;
  k.sectors = sectors;
  const double c = strong_scale(k);
  const double gg = std::tgamma(k.alpha) * std::tgamma(k.beta);
  k.B_s = k.K * c / (gg * gg * k.h_c);
  const int N = sectors.N();
  k.Bn_prime.resize(N);
  k.Bn_dprime.resize(N);
  for (int n = 0; n < N; ++n) {
    k.Bn_prime[n] = c / (k.h_c * sectors.V[n + 1]);
    k.Bn_dprime[n] = c / (k.h_c * sectors.V[n]);
  }
  return k;
}

namespace detail {

inline MeijerGSpec g_pdf(const StrongModelConstants& k) {
  const double a1 = k.alpha - 1.0;
  const double b1 = k.beta - 1.0;
  return {6, 0, {k.K, 1.0}, {0.0, a1, b1, k.K - 1.0, a1, b1}};
}

inline MeijerGSpec g_cdf(const StrongModelConstants& k) {
  const double a1 = k.alpha - 1.0;
  const double b1 = k.beta - 1.0;
  return {6, 1, {0.0, k.K, 1.0}, {0.0, a1, b1, k.K - 1.0, a1, b1, -1.0}};
}

inline MeijerGSpec g_pdf_simple(const StrongModelConstants& k) {
  const double a1 = k.alpha - 1.0;
  const double b1 = k.beta - 1.0;
  return {5, 0, {k.K}, {a1, b1, k.K - 1.0, a1, b1}};
}

inline MeijerGSpec g_cdf_simple(const StrongModelConstants& k) {
  const double a1 = k.alpha - 1.0;
  const double b1 = k.beta - 1.0;
  return {5, 1, {0.0, k.K}, {a1, b1, k.K - 1.0, a1, b1, -1.0}};
}

template <class Term>
double sector_sum(const StrongModelConstants& k, Term&& term) {
  double acc = 0.0;
  for (int n = 0; n < k.sectors.N(); ++n) {
    acc += k.sectors.B[n] * (term(k.Bn_prime[n]) - term(k.Bn_dprime[n]));
  }
  return acc;
}

}  // namespace detail

inline double pdf_h_strong(double h, const StrongModelConstants& k) {
  if (!(h > 0.0)) return 0.0;
  const MeijerGSpec g = detail::g_pdf(k);
  return k.B_s * detail::sector_sum(k, [&](double b) { return meijer_g(g, b * h, k.meijer); });
}

inline double cdf_h_strong(double h, const StrongModelConstants& k) {
  if (!(h > 0.0)) return 0.0;
  const MeijerGSpec g = detail::g_cdf(k);
  return k.B_s * h * detail::sector_sum(k, [&](double b) { return meijer_g(g, b * h, k.meijer); });
}

inline double pdf_snr_strong(double gamma, const StrongModelConstants& k) {
  if (!(gamma > 0.0)) return 0.0;
  return pdf_h_strong(std::sqrt(gamma / k.Upsilon1), k) / (2.0 * std::sqrt(k.Upsilon1 * gamma));
}

inline double cdf_snr_strong(double gamma, const StrongModelConstants& k) {
  if (!(gamma > 0.0)) return 0.0;
  return cdf_h_strong(std::sqrt(gamma / k.Upsilon1), k);
}

inline double outage_strong(const StrongModelConstants& k, double gamma_th) { return cdf_snr_strong(gamma_th, k); }

/// Which constant the simplified (single-sector, h_MRR = 1) forms use.
/// `Printed` drops h_c from both the prefactor and the argument scale;
/// `WithHc` keeps it, which is the form that agrees with the sector model.
enum class SimpleForm { Printed, WithHc };

namespace detail {

inline double simple_scale(const StrongModelConstants& k, SimpleForm form) {
  const double c = strong_scale(k);
  return form == SimpleForm::Printed ? c : c / k.h_c;
}

inline double simple_prefactor(const StrongModelConstants& k, SimpleForm form) {
  const double gg = std::tgamma(k.alpha) * std::tgamma(k.beta);
  return simple_scale(k, form) * k.K / (gg * gg);
}

}  // namespace detail

inline double pdf_h_strong_simple(double h, const StrongModelConstants& k, SimpleForm form = SimpleForm::Printed) {
  if (!(h > 0.0)) return 0.0;
  return detail::simple_prefactor(k, form) *
         meijer_g(detail::g_pdf_simple(k), detail::simple_scale(k, form) * h, k.meijer);
}

inline double cdf_h_strong_simple(double h, const StrongModelConstants& k, SimpleForm form = SimpleForm::Printed) {
  if (!(h > 0.0)) return 0.0;
  return detail::simple_prefactor(k, form) * h *
         meijer_g(detail::g_cdf_simple(k), detail::simple_scale(k, form) * h, k.meijer);
}

inline double pdf_snr_strong_simple(double gamma, const StrongModelConstants& k,
                                    SimpleForm form = SimpleForm::Printed) {
  if (!(gamma > 0.0)) return 0.0;
  return pdf_h_strong_simple(std::sqrt(gamma / k.Upsilon1), k, form) / (2.0 * std::sqrt(k.Upsilon1 * gamma));
}

inline double cdf_snr_strong_simple(double gamma, const StrongModelConstants& k,
                                    SimpleForm form = SimpleForm::Printed) {
  if (!(gamma > 0.0)) return 0.0;
  return cdf_h_strong_simple(std::sqrt(gamma / k.Upsilon1), k, form);
}

/// Parameter lists of the G^{12,2}_{6,13} kernel in the closed-form BER.
inline MeijerGSpec ber_kernel(const StrongModelConstants& k) {
  const double a = k.alpha;
  const double b = k.beta;
  const double K = k.K;
  return {12,
          2,
          {0.0, 0.5, K / 2.0, (K + 1.0) / 2.0, 0.5, 1.0},
          {0.0, 0.5, (a - 1.0) / 2.0, a / 2.0, (b - 1.0) / 2.0, b / 2.0, (K - 1.0) / 2.0, K / 2.0, (a - 1.0) / 2.0,
           a / 2.0, (b - 1.0) / 2.0, b / 2.0, -0.5}};
}

/// E[Q(sqrt(Upsilon1) h)] restricted to one sector endpoint: the BER is
/// B_s sum_n B_n [J(B'_n) - J(B''_n)].
inline double ber_strong_term(double b, const StrongModelConstants& k) {
  const double log_pref = (2.0 * k.alpha + 2.0 * k.beta - 10.5) * std::numbers::ln2 -
                          2.5 * std::log(std::numbers::pi) - 0.5 * std::log(k.Upsilon1);
  return std::exp(log_pref) * meijer_g(ber_kernel(k), b * b / (128.0 * k.Upsilon1), k.meijer);
}

/// Average OOK BER by quadrature of F_h against the Gaussian tail density:
/// E[Q(s h)] = int_0^inf F_h(h) s phi(s h) dh.
inline double ber_strong_quadrature(const StrongModelConstants& k) {
  const double s = std::sqrt(k.Upsilon1);
  auto f = [&](double x) {
    // x = s h, so the weight is the standard normal density.
    const double w = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
    return w * cdf_h_strong(x / s, k);
  };
  const std::vector<double> breaks = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0, 13.0, 38.0};
  const double rough = quad::integrate_pieces(f, breaks, 0.0, 1e-4, 3).value;
  return quad::integrate_pieces(f, breaks, 1e-8 * rough, 1e-8, 12).value;
}

inline BerResult ber_strong(const StrongModelConstants& k, bool allow_fallback = true) {
  try {
    const double v = k.B_s * detail::sector_sum(k, [&](double b) { return ber_strong_term(b, k); });
    if (std::isfinite(v) && v > 0.0) return {v, BerMethod::ClosedForm};
    if (!allow_fallback) throw Error(ErrorCode::NonConvergent, "closed-form BER is not a probability");
  } catch (const Error& e) {
    if (!allow_fallback || e.code() != ErrorCode::NonConvergent) throw;
  }
  return {ber_strong_quadrature(k), BerMethod::Quadrature};
}

}  // namespace mrrfso
