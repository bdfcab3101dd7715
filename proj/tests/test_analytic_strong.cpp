#include <gtest/gtest.h>

#include <cmath>

#include "mrrfso/analytic_strong.hpp"
#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"
#include "mrrfso/mrr.hpp"
#include "mrrfso/quadrature.hpp"

using namespace mrrfso;

namespace {

void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::abs(want)) << "want " << want; }

// Defaults with Cn2 = 1e-13; alpha, beta pinned to the oracle inputs.
LinkConfig strong_link() {
  LinkConfig c;
  c.cn2_0 = 1e-13;
  return c;
}

TurbulenceStats pinned_stats(const LinkConfig& c) {
  TurbulenceStats s = turbulence_stats(c);
  s.alpha = 3.9926785413809;
  s.beta = 1.71435787613743;
  return s;
}

const SectorModel kTwoSectors{{0.5, 0.75, 1.0}, {1.2, 2.8}};

// pt_dbm = 0 keeps the default transmit power; only the BER depends on it.
StrongModelConstants oracle_constants(double pt_dbm = 0.0) {
  LinkConfig c = strong_link();
  if (pt_dbm != 0.0) c.P_t = dbm_to_watt(pt_dbm);
  return strong_constants(c, pinned_stats(c), kTwoSectors);
}

// Deterministic gain h_c 2 A_r / (pi w^2) of the oracle geometry.
constexpr double kScale = 1.559718442300574e-05;

}  // namespace

// tests/oracles/strong_oracle.py integrates the product density directly.
TEST(AnalyticStrong, CdfAndPdfMatchOracle) {
  const auto k = oracle_constants();
  expect_rel(2.0 * k.A_r * k.h_c / (std::numbers::pi * k.w_z * k.w_z), kScale, 1e-12);
  const double r[] = {0.1, 0.5, 1.2};
  const double cdf[] = {2.15561167588228e-01, 6.13655833108382e-01, 8.27725606302845e-01};
  const double pdf[] = {1.16430795817300e+05, 3.53041274052429e+04, 1.06473401859404e+04};
  for (int i = 0; i < 3; ++i) {
    expect_rel(cdf_h_strong(r[i] * kScale, k), cdf[i], 1e-6);
    // The oracle differentiates a spline; its density carries ~1e-6 error.
    expect_rel(pdf_h_strong(r[i] * kScale, k), pdf[i], 1e-5);
  }
}

TEST(AnalyticStrong, BerMatchesOracle) {
  const BerResult b10 = ber_strong(oracle_constants(10.0));
  EXPECT_EQ(b10.method, BerMethod::ClosedForm);
  expect_rel(b10.value, 2.513128890853e-01, 1e-6);
  const BerResult b20 = ber_strong(oracle_constants(20.0));
  EXPECT_EQ(b20.method, BerMethod::ClosedForm);
  expect_rel(b20.value, 4.948350073452e-02, 1e-6);
}

TEST(AnalyticStrong, ClosedFormBerAgreesWithQuadrature) {
  for (double dbm : {5.0, 15.0, 25.0}) {
    const auto k = oracle_constants(dbm);
    expect_rel(ber_strong(k, false).value, ber_strong_quadrature(k), 1e-5);
  }
}

TEST(AnalyticStrong, PdfIntegratesToCdf) {
  const auto k = oracle_constants();
  const double top = 3.0 * kScale;
  const auto r = quad::integrate([&](double h) { return pdf_h_strong(h, k); }, 0.0, top, 1e-12, 1e-9);
  EXPECT_NEAR(r.value, cdf_h_strong(top, k), 1e-7);
  // beta < 2 leaves a few 1e-6 of mass beyond 50x the deterministic gain.
  const double tail = 1.0 - cdf_h_strong(50.0 * kScale, k);
  EXPECT_GT(tail, 0.0);
  EXPECT_LT(tail, 1e-5);
  EXPECT_EQ(pdf_h_strong(0.0, k), 0.0);
  EXPECT_EQ(cdf_h_strong(-1.0, k), 0.0);
}

TEST(AnalyticStrong, SnrDistributionIsChangeOfVariable) {
  const auto k = oracle_constants(15.0);
  const double h = 0.4 * kScale;
  const double g = k.Upsilon1 * h * h;
  EXPECT_DOUBLE_EQ(cdf_snr_strong(g, k), cdf_h_strong(h, k));
  expect_rel(pdf_snr_strong(g, k) * 2.0 * k.Upsilon1 * h, pdf_h_strong(h, k), 1e-12);
  EXPECT_DOUBLE_EQ(outage_strong(k, g), cdf_snr_strong(g, k));
}

TEST(AnalyticStrong, SimpleForms) {
  // h_MRR pinned at 1: a proper distribution once h_c is kept.
  const auto k = oracle_constants();
  EXPECT_NEAR(cdf_h_strong_simple(200.0 * kScale, k, SimpleForm::WithHc), 1.0, 1e-6);
  const double h = 0.3 * kScale;
  const auto r = quad::integrate([&](double x) { return pdf_h_strong_simple(x, k, SimpleForm::WithHc); }, 0.0, h,
                                 1e-12, 1e-9);
  EXPECT_NEAR(r.value, cdf_h_strong_simple(h, k, SimpleForm::WithHc), 1e-7);
  // The printed form is the with-h_c form with h rescaled by h_c.
  expect_rel(cdf_h_strong_simple(h, k, SimpleForm::Printed), cdf_h_strong_simple(h * k.h_c, k, SimpleForm::WithHc),
             1e-12);
}

TEST(AnalyticStrong, ConstructionErrors) {
  LinkConfig c = strong_link();
  LinkConfig weak = c;
  weak.cn2_0 = 5e-15;
  try {
    strong_constants(weak, turbulence_stats(weak), kTwoSectors);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RegimeMismatch);
  }
  try {
    strong_constants(c, pinned_stats(c), SectorModel{{0.5, 1.0}, {1.0, 1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MismatchedLengths);
  }
  try {
    strong_constants(c, pinned_stats(c), SectorModel{{0.0, 1.0}, {1.0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonPositiveBreakpoint);
  }
}

TEST(AnalyticStrong, ConsistentExponentIsQuarter) {
  const LinkConfig c = strong_link();
  const auto printed = strong_constants(c, pinned_stats(c), kTwoSectors, PointingExponent::Printed);
  const auto consistent = strong_constants(c, pinned_stats(c), kTwoSectors, PointingExponent::Consistent);
  EXPECT_DOUBLE_EQ(consistent.K, printed.K / 4.0);
  EXPECT_NEAR(cdf_h_strong(50.0 * kScale, consistent), 1.0, 1e-5);
}
