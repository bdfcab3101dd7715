#include <gtest/gtest.h>

#include <cmath>

#include "mrrfso/channel.hpp"
#include "mrrfso/error.hpp"

using namespace mrrfso;

namespace {
void expect_rel(double got, double want, double tol) { EXPECT_NEAR(got, want, tol * std::abs(want)) << "want " << want; }

LinkConfig with_cn2(double c) {
  LinkConfig cfg;
  cfg.cn2_0 = c;
  return cfg;
}
}  // namespace

// tests/oracles/channel_oracle.py
TEST(Channel, RytovVarianceMatchesOracle) {
  expect_rel(rytov_variance(with_cn2(5e-15)), 0.106464495990512, 1e-8);
  expect_rel(rytov_variance(with_cn2(1e-14)), 0.204549118812785, 1e-8);
  expect_rel(rytov_variance(with_cn2(5e-14)), 0.989226101390964, 1e-8);
  expect_rel(rytov_variance(with_cn2(1e-13)), 1.97007232961369, 1e-8);
  LinkConfig c = with_cn2(5e-15);
  c.Z = 800.0;
  expect_rel(rytov_variance(c), 0.0707190544456793, 1e-8);
}

TEST(Channel, RytovScalesLinearlyWithGroundTerm) {
  // With only the ground term left the integral is linear in Cn2_0.
  LinkConfig c;
  auto ground = [&](double zh) { return c.cn2_0 * std::exp(-zh / 100.0); };
  c.cn2_0 = 1e-14;
  const double a = rytov_variance(c, ground);
  c.cn2_0 = 3e-14;
  expect_rel(rytov_variance(c, ground), 3.0 * a, 1e-10);
}

TEST(Channel, RytovRejectsFlatGeometry) {
  LinkConfig c;
  c.Z_hu = c.Z_hg;
  try {
    rytov_variance(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateGeometry);
  }
}

TEST(Channel, GammaGammaParameters) {
  const auto g1 = gg_params(1.0);
  expect_rel(g1.alpha, 4.39385902539215, 1e-12);
  expect_rel(g1.beta, 2.56363197950369, 1e-12);
  const auto g2 = gg_params(1.97007232961369);
  expect_rel(g2.alpha, 3.99267862228053, 1e-10);
  expect_rel(g2.beta, 1.7143271703021, 1e-10);
  EXPECT_THROW(gg_params(0.0), Error);
}

TEST(Channel, RegimeRules) {
  EXPECT_EQ(turbulence_stats(with_cn2(5e-15)).regime, Regime::WeakToModerate);
  EXPECT_EQ(turbulence_stats(with_cn2(1e-13)).regime, Regime::ModerateToStrong);
  EXPECT_EQ(regime_from_rytov(0.999), Regime::WeakToModerate);
  EXPECT_EQ(regime_from_rytov(1.0), Regime::ModerateToStrong);
  EXPECT_EQ(regime_from_cn2(5e-15), Regime::WeakToModerate);
  EXPECT_EQ(regime_from_cn2(1e-14), Regime::ModerateToStrong);
  const auto s = turbulence_stats(with_cn2(5e-15));
  EXPECT_DOUBLE_EQ(s.sigma_L2, s.sigma_R2 / 4.0);
}

TEST(Channel, DeterministicLosses) {
  LinkConfig c;
  EXPECT_DOUBLE_EQ(beamwidth(c), 0.4);
  EXPECT_DOUBLE_EQ(beer_lambert(c), 0.7);
  expect_rel(geometric_loss_gs(c), 2.0 * 0.08 * 0.08 / 0.16, 1e-15);
  expect_rel(h_c(c), 0.49 * 0.08, 1e-14);
  c.h_l.reset();
  c.zeta = 1e-4;
  expect_rel(beer_lambert(c), std::exp(-0.1), 1e-15);
}

TEST(Channel, PointingExponentConventions) {
  LinkConfig c;
  EXPECT_DOUBLE_EQ(pointing_exponent(c), 16.0);
  EXPECT_DOUBLE_EQ(pointing_exponent(c, PointingExponent::Consistent), 4.0);
  c.sigma_theta_e = 0.0;
  try {
    pointing_exponent(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateDistribution);
  }
}

TEST(Channel, PointingLossTriangleMatchesOracle) {
  LinkConfig c;
  expect_rel(pointing_loss_exact(c, 0.0, 0.0), 3.977916593252684e-04, 1e-9);
  expect_rel(pointing_loss_exact(c, 0.1, -0.05), 3.402620452153118e-04, 1e-9);
  expect_rel(pointing_loss_exact(c, 0.3, 0.2), 7.836028420623877e-05, 1e-9);
  LinkConfig wide;
  wide.theta_div = 0.05 / wide.Z;
  wide.A_r = 4e-4;
  expect_rel(pointing_loss_exact(wide, 0.01, 0.02), 6.582412369621936e-02, 1e-9);
}

TEST(Channel, PlaneWaveApproximationWhenApertureIsSmall) {
  LinkConfig c;
  ASSERT_TRUE(plane_wave_ok(c));
  for (double d : {0.0, 0.1, 0.25, 0.5}) {
    expect_rel(pointing_loss_approx(c, d, 0.3 * d), pointing_loss_exact(c, d, 0.3 * d), 2e-3);
    expect_rel(pointing_loss_approx(c, d, 0.0), pointing_loss_exact(c, d, 0.0, ApertureShape::Disc), 2e-3);
  }
}

TEST(Channel, SnrMap) {
  LinkConfig c;
  // P_t = 20 dBm, R = 0.8, sigma_n^2 = -11 dBm (in mA^2) = 10^-1.1 * 1e-6 A^2.
  c.P_t = dbm_to_watt(20.0);
  c.sigma_n2 = std::pow(10.0, -1.1) * 1e-6;
  const double u = 2.0 * 0.64 * 0.01 / c.sigma_n2;
  expect_rel(upsilon1(c), u, 1e-14);
  expect_rel(snr_from_h(c, 1e-3), u * 1e-6, 1e-14);
  EXPECT_THROW(snr_from_h(c, -1.0), Error);
}

TEST(Channel, UnitHelpers) {
  expect_rel(dbm_to_watt(20.0), 0.1, 1e-15);
  expect_rel(watt_to_dbm(0.1), 20.0, 1e-15);
  expect_rel(db_to_linear(5.0), 3.1622776601683795, 1e-15);
}

TEST(Channel, ValidateRejectsBadConfigs) {
  LinkConfig c;
  c.Z = -1.0;
  EXPECT_THROW(validate(c), Error);
  LinkConfig both;
  both.zeta = 1e-4;
  EXPECT_THROW(validate(both), Error);
  EXPECT_NO_THROW(validate(LinkConfig{}));
}
