#pragma once

// Physical layer of the GS -> UAV -> GS link: geometry, turbulence
// statistics, deterministic losses and the SNR map.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "mrrfso/error.hpp"
#include "mrrfso/quadrature.hpp"

namespace mrrfso {

constexpr double kDegree = std::numbers::pi / 180.0;

/// Full description of one link. Lengths in meters, angles in radians,
/// powers in watts, noise variance in A^2, thresholds linear.
struct LinkConfig {
  double Z = 1000.0;
  double Z_hg = 2.0;
  double Z_hu = 102.0;
  double lambda = 1550e-9;
  double theta_div = 0.4e-3;
  double r_g = 0.08;
  double A_r = 1e-4;
  double sigma_theta_e = 100e-6;
  double sigma_theta_o = 2.0 * kDegree;
  // Exactly one of zeta (1/m) or h_l (per-pass transmittance) is set.
  std::optional<double> zeta;
  std::optional<double> h_l = 0.7;
  double cn2_0 = 5e-15;
  double wind_v = 27.0;
  double P_t = 0.1;
  double R_pd = 0.8;
  double sigma_n2 = 1e-14;
  double gamma_th = 3.1622776601683795;  // 5 dB
};

/// Throws InvalidSpec on a config that violates the basic invariants.
inline void validate(const LinkConfig& c) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (!(c.Z > 0.0)) fail("Z must be positive");
  if (!(c.Z_hg >= 0.0)) fail("Z_hg must be non-negative");
  if (!(c.Z_hu >= c.Z_hg)) fail("Z_hu must not be below Z_hg");
  if (!(c.theta_div > 0.0)) fail("theta_div must be positive");
  if (!(c.A_r > 0.0)) fail("A_r must be positive");
  if (!(c.r_g > 0.0)) fail("r_g must be positive");
  if (!(c.lambda > 0.0)) fail("lambda must be positive");
  if (c.sigma_theta_e < 0.0 || c.sigma_theta_o < 0.0) fail("angular SDs must be non-negative");
  if (c.zeta.has_value() == c.h_l.has_value()) fail("exactly one of zeta or h_l must be given");
  if (c.h_l && !(*c.h_l > 0.0 && *c.h_l <= 1.0)) fail("h_l must lie in (0, 1]");
  if (c.zeta && !(*c.zeta >= 0.0)) fail("zeta must be non-negative");
  if (!(c.P_t >= 0.0) || !(c.R_pd > 0.0) || !(c.sigma_n2 > 0.0)) fail("transceiver parameters out of range");
}

enum class Regime { WeakToModerate, ModerateToStrong };

inline const char* to_string(Regime r) {
  return r == Regime::WeakToModerate ? "weak" : "strong";
}

struct TurbulenceStats {
  double sigma_R2 = 0.0;
  double sigma_L2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  Regime regime = Regime::WeakToModerate;
};

inline double cn2_profile(double Z_h, double cn2_0, double wind_v) {
  const double r = wind_v / 27.0;
  return 0.00594 * r * r * std::pow(1e-5 * Z_h, 10.0) * std::exp(-Z_h / 1000.0) +
         2.7e-16 * std::exp(-Z_h / 1500.0) + cn2_0 * std::exp(-Z_h / 100.0);
}

/// Rytov variance for two nodes at heights Z_hg and Z_hu, separated by Z.
/// The profile can be replaced, which the tests use to zero individual terms.
template <class Profile>
double rytov_variance(const LinkConfig& c, const Profile& cn2) {
  const double z_hd = c.Z_hu - c.Z_hg;
  if (!(z_hd > 0.0)) {
    throw Error(ErrorCode::DegenerateGeometry, "rytov_variance needs Z_hu > Z_hg");
  }
  auto f = [&](double zh) {
    const double u = zh - c.Z_hg;
    const double v = 1.0 - u / z_hd;
    if (u <= 0.0 || v <= 0.0) return 0.0;
    return cn2(zh) * std::pow(v * u, 5.0 / 6.0);
  };
  const quad::Result r = quad::integrate(f, c.Z_hg, c.Z_hu, 0.0, 1e-10, 30);
  const double k = 2.0 * std::numbers::pi / c.lambda;
  return 9.0 * std::pow(k, 7.0 / 6.0) * std::pow(c.Z / z_hd, 11.0 / 6.0) * r.value;
}

inline double rytov_variance(const LinkConfig& c) {
  return rytov_variance(c, [&](double zh) { return cn2_profile(zh, c.cn2_0, c.wind_v); });
}

struct GammaGammaParams {
  double alpha;
  double beta;
};

/// Plane-wave Gamma-Gamma shape parameters.
inline GammaGammaParams gg_params(double sigma_R2) {
  if (!(sigma_R2 > 0.0)) throw Error(ErrorCode::DomainError, "gg_params requires sigma_R2 > 0");
  const double s125 = std::pow(sigma_R2, 1.2);
  const double a = std::expm1(0.49 * sigma_R2 / std::pow(1.0 + 1.11 * s125, 7.0 / 6.0));
  const double b = std::expm1(0.51 * sigma_R2 / std::pow(1.0 + 0.69 * s125, 5.0 / 6.0));
  return {1.0 / a, 1.0 / b};
}

inline Regime regime_from_rytov(double sigma_R2) {
  return sigma_R2 < 1.0 ? Regime::WeakToModerate : Regime::ModerateToStrong;
}

/// Alternative rule keyed on the ground structure constant.
inline Regime regime_from_cn2(double cn2_0) {
  return cn2_0 < 1e-14 ? Regime::WeakToModerate : Regime::ModerateToStrong;
}

inline TurbulenceStats turbulence_stats(const LinkConfig& c) {
  TurbulenceStats s;
  s.sigma_R2 = rytov_variance(c);
  s.sigma_L2 = s.sigma_R2 / 4.0;
  s.regime = regime_from_rytov(s.sigma_R2);
  if (s.sigma_R2 > 0.0) {
    const GammaGammaParams gg = gg_params(s.sigma_R2);
    s.alpha = gg.alpha;
    s.beta = gg.beta;
  }
  return s;
}

/// Per-pass atmospheric transmittance; both directions are equal.
inline double beer_lambert(const LinkConfig& c) {
  if (c.h_l) return *c.h_l;
  return std::exp(-c.Z * c.zeta.value_or(0.0));
}

inline double beamwidth(const LinkConfig& c) { return c.theta_div * c.Z; }

/// True when the aperture is small enough for the plane-wave pointing model.
inline bool plane_wave_ok(const LinkConfig& c) {
  const double w = beamwidth(c);
  return c.A_r <= 0.01 * std::numbers::pi * w * w / 2.0;
}

inline double pointing_loss_approx(const LinkConfig& c, double d_px, double d_py) {
  const double w = beamwidth(c);
  const double a0 = 2.0 * c.A_r / (std::numbers::pi * w * w);
  return a0 * std::exp(-2.0 * (d_px * d_px + d_py * d_py) / (w * w));
}

enum class ApertureShape { Triangle, Disc };

/// Gaussian beam power through a displaced aperture of area A_r. The triangle
/// is equilateral with its centroid at the origin and one vertex on +y.
inline double pointing_loss_exact(const LinkConfig& c, double d_px, double d_py,
                                  ApertureShape shape = ApertureShape::Triangle) {
  const double w = beamwidth(c);
  const double s2 = std::numbers::sqrt2 / w;
  // Inner x-integral of the normalized Gaussian in closed form.
  auto strip = [&](double x_lo, double x_hi, double y) {
    if (x_hi <= x_lo) return 0.0;
    const double gy = std::exp(-2.0 * (y - d_py) * (y - d_py) / (w * w));
    const double gx = 0.5 * std::sqrt(std::numbers::pi) / s2 *
                      (std::erf(s2 * (x_hi - d_px)) - std::erf(s2 * (x_lo - d_px)));
    return 2.0 / (std::numbers::pi * w * w) * gx * gy;
  };
  double y_lo = 0.0;
  double y_hi = 0.0;
  std::function<double(double)> hw;
  if (shape == ApertureShape::Triangle) {
    const double side = std::sqrt(4.0 * c.A_r / std::sqrt(3.0));
    const double h = side * std::sqrt(3.0) / 2.0;
    y_lo = -h / 3.0;
    y_hi = 2.0 * h / 3.0;
    hw = [=](double y) { return 0.5 * side * (y_hi - y) / h; };
  } else {
    const double r = std::sqrt(c.A_r / std::numbers::pi);
    y_lo = -r;
    y_hi = r;
    hw = [=](double y) { return std::sqrt(std::max(0.0, r * r - y * y)); };
  }
  auto f = [&](double y) {
    const double x = hw(y);
    return strip(-x, x, y);
  };
  const double peak = 2.0 * c.A_r / (std::numbers::pi * w * w);
  const quad::Result r = quad::integrate(f, y_lo, y_hi, std::min(1e-8, 1e-11 * peak), 1e-12, 30);
  if (!std::isfinite(r.value)) throw Error(ErrorCode::NonConvergent, "pointing_loss_exact quadrature failed");
  return r.value;
}

/// Geometric collection loss at the GS aperture.
inline double geometric_loss_gs(const LinkConfig& c) {
  return 2.0 * c.r_g * c.r_g / (c.Z * c.Z * c.theta_div * c.theta_div);
}

/// Deterministic part of the channel: two passes of attenuation and the GS
/// collection loss.
inline double h_c(const LinkConfig& c) {
  const double hl = beer_lambert(c);
  return hl * hl * geometric_loss_gs(c);
}

/// How the pointing-loss exponent K is tied to the beam geometry. `Printed`
/// uses w_z^2 / (Z^2 sigma_e^2). `Consistent` uses w_z^2 / (4 Z^2 sigma_e^2),
/// the exponent actually produced by a Rayleigh displacement through the
/// plane-wave pointing loss, so the analytic densities match simulation.
enum class PointingExponent { Printed, Consistent };

inline double pointing_exponent(const LinkConfig& c, PointingExponent conv = PointingExponent::Printed) {
  const double w = beamwidth(c);
  const double s = c.Z * c.sigma_theta_e;
  if (!(s > 0.0)) {
    throw Error(ErrorCode::DegenerateDistribution, "pointing exponent is unbounded for sigma_theta_e = 0");
  }
  const double k = w * w / (s * s);
  return conv == PointingExponent::Printed ? k : 0.25 * k;
}

inline double upsilon1(const LinkConfig& c) {
  return 2.0 * c.R_pd * c.R_pd * c.P_t * c.P_t / c.sigma_n2;
}

inline double snr_from_h(const LinkConfig& c, double h) {
  if (!(h >= 0.0)) throw Error(ErrorCode::DomainError, "snr_from_h requires h >= 0");
  return upsilon1(c) * h * h;
}

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace mrrfso
