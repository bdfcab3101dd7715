#include <gtest/gtest.h>

#include <cmath>

#include "mrrfso/analytic_weak.hpp"
#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/quadrature.hpp"

using namespace mrrfso;

namespace {

void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::abs(want)) << "want " << want; }

// Cn2 = 5e-15, theta_div = 0.4 mrad, sigma_e = 100 urad, sigma_o = 2 deg.
LinkConfig fig7() {
  LinkConfig c;
  c.cn2_0 = 5e-15;
  c.sigma_theta_o = 2.0 * kDegree;
  return c;
}

WeakModelConstants fig7_constants(PointingExponent conv = PointingExponent::Printed) {
  const LinkConfig c = fig7();
  return weak_constants(c, mrr_moments(c.sigma_theta_o), turbulence_stats(c), conv);
}

}  // namespace

// Independent arithmetic in tests/oracles/weak_oracle.py.
TEST(AnalyticWeak, ConstantsMatchOracle) {
  const auto k = fig7_constants();
  expect_rel(k.C1, 0.21434433861610316, 1e-8);
  expect_rel(k.C2, 0.17974286214288696, 1e-8);
  expect_rel(k.C3, 64114.135787546818, 1e-12);
  expect_rel(k.h_c, 0.0392, 1e-13);
  EXPECT_DOUBLE_EQ(k.K, 16.0);
  // log C4 = ln K + K ln C3 + (C1 K^2 + 2 K C2) / 2
  expect_rel(k.log_C4, std::log(16.0) + 16.0 * std::log(k.C3) + 0.5 * (k.C1 * 256.0 + 32.0 * k.C2), 1e-14);
  expect_rel(k.C5, std::log(k.C3) + 16.0 * k.C1 + k.C2, 1e-14);
}

TEST(AnalyticWeak, CdfAndPdfMatchDirectIntegration) {
  const auto k = fig7_constants();
  expect_rel(cdf_h_weak(0.3 / k.C3, k), 0.0198961221481561, 1e-7);
  expect_rel(cdf_h_weak(0.7 / k.C3, k), 0.40294596574848, 1e-7);
  expect_rel(cdf_h_weak(0.95 / k.C3, k), 0.658426313575135, 1e-7);
  expect_rel(pdf_h_weak(0.3 / k.C3, k), 21961.9136741175, 1e-6);
  expect_rel(pdf_h_weak(0.7 / k.C3, k), 75876.503538536, 1e-6);
  expect_rel(pdf_h_weak(0.95 / k.C3, k), 53068.2495130958, 1e-6);
}

TEST(AnalyticWeak, PdfIsNormalizedAndCdfIsItsIntegral) {
  for (auto conv : {PointingExponent::Printed, PointingExponent::Consistent}) {
    const auto k = fig7_constants(conv);
    auto f = [&](double u) {
      const double h = std::exp(u);
      return pdf_h_weak(h, k) * h;
    };
    const double top = std::log(20.0 / k.C3);
    EXPECT_NEAR(quad::integrate(f, top - 30.0, top, 0.0, 1e-12).value, 1.0, 1e-9);
    const double h = 0.6 / k.C3;
    EXPECT_NEAR(quad::integrate(f, top - 30.0, std::log(h), 0.0, 1e-12).value, cdf_h_weak(h, k), 1e-9);
  }
}

TEST(AnalyticWeak, SnrDistributionIsTheChangeOfVariable) {
  const auto k = fig7_constants();
  const double h = 0.5 / k.C3;
  const double g = k.Upsilon1 * h * h;
  expect_rel(cdf_snr_weak(g, k), cdf_h_weak(h, k), 1e-14);
  // f_gamma(g) = f_h(h) / (2 sqrt(Upsilon1 g))
  expect_rel(pdf_snr_weak(g, k), pdf_h_weak(h, k) / (2.0 * std::sqrt(k.Upsilon1 * g)), 1e-14);
  EXPECT_DOUBLE_EQ(outage_weak(k, g), cdf_snr_weak(g, k));
  EXPECT_DOUBLE_EQ(cdf_snr_weak(0.0, k), 0.0);
}

TEST(AnalyticWeak, BerQuadratureMatchesOracle) {
  LinkConfig c = fig7();
  const auto m = mrr_moments(c.sigma_theta_o);
  c.P_t = dbm_to_watt(10.0);
  expect_rel(ber_weak_quadrature(weak_constants(c, m, turbulence_stats(c))), 0.100527441582, 1e-7);
  c.P_t = dbm_to_watt(20.0);
  expect_rel(ber_weak_quadrature(weak_constants(c, m, turbulence_stats(c))), 4.01036321105e-6, 1e-7);
}

TEST(AnalyticWeak, SeriesBerIsClosedFormAndBelowTheExactValue) {
  // Truncating the SNR integral at gamma_max drops tail mass, so the
  // series sits below the exact average.
  LinkConfig c = fig7();
  c.P_t = dbm_to_watt(15.0);
  const auto k = weak_constants(c, mrr_moments(c.sigma_theta_o), turbulence_stats(c));
  const BerResult r = ber_weak(k);
  EXPECT_EQ(r.method, BerMethod::ClosedForm);
  EXPECT_GT(r.value, 0.0);
  EXPECT_LT(r.value, ber_weak_quadrature(k));
}

TEST(AnalyticWeak, SeriesOverflowFallsBackOrThrows) {
  LinkConfig c = fig7();
  c.P_t = dbm_to_watt(15.0);
  const auto k = weak_constants(c, mrr_moments(c.sigma_theta_o), turbulence_stats(c));
  const BerResult r = ber_weak(k, 20, 1e6);
  EXPECT_EQ(r.method, BerMethod::Quadrature);
  try {
    ber_weak(k, 20, 1e6, false);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NumericalOverflow);
  }
}

TEST(AnalyticWeak, RegimeAndDegeneracyErrors) {
  LinkConfig c;
  c.cn2_0 = 1e-13;
  try {
    weak_constants(c, mrr_moments(c.sigma_theta_o), turbulence_stats(c));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RegimeMismatch);
  }
  TurbulenceStats calm;
  try {
    weak_constants(LinkConfig{}, MrrMoments{1.0, 0.0}, calm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDistribution);
  }
}
