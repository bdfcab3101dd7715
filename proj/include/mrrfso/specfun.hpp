#pragma once

// Scalar special functions shared by the analytic channel formulas.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>

#include "mrrfso/error.hpp"

namespace mrrfso::specfun {

inline double erf(double x) { return std::erf(x); }
inline double erfc(double x) { return std::erfc(x); }

/// log(erfc(x)) without underflow for large positive x.
inline double log_erfc(double x) {
  if (x < 25.0) return std::log(std::erfc(x));
  const double inv2 = 1.0 / (x * x);
  const double series =
      1.0 + inv2 * (-0.5 + inv2 * (0.75 + inv2 * (-1.875 + inv2 * (6.5625 - inv2 * 29.53125))));
  return -x * x - std::log(x) - 0.5 * std::log(std::numbers::pi) + std::log(series);
}

/// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

inline double log_q_function(double x) {
  return log_erfc(x / std::numbers::sqrt2) - std::numbers::ln2;
}

inline double gamma(double x) { return std::tgamma(x); }
inline double log_gamma(double x) { return std::lgamma(x); }

/// Modified Bessel function of the second kind, K_nu(x), even in nu.
inline double bessel_k(double nu, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::DomainError, "bessel_k requires x > 0");
  }
  return std::cyl_bessel_k(std::abs(nu), x);
}

namespace detail {

// log(sin(pi z)) that stays finite for large |Im z|. Only exp() of the result
// is ever used, so the imaginary part is correct modulo 2*pi.
inline std::complex<double> log_sin_pi(std::complex<double> z) {
  using C = std::complex<double>;
  constexpr double pi = std::numbers::pi;
  const C i(0.0, 1.0);
  if (std::abs(z.imag()) < 15.0) return std::log(std::sin(pi * z));
  if (z.imag() > 0.0) {
    // sin(pi z) = exp(-i pi z) (exp(2 i pi z) - 1) / (2i)
    const C w = std::exp(2.0 * i * pi * z);
    return -i * pi * z + std::log(w - 1.0) - std::log(2.0 * i);
  }
  // sin(pi z) = exp(i pi z) (1 - exp(-2 i pi z)) / (2i)
  const C w = std::exp(-2.0 * i * pi * z);
  return i * pi * z + std::log(1.0 - w) - std::log(2.0 * i);
}

inline std::complex<double> log_gamma_stirling(std::complex<double> z) {
  // Bernoulli terms B_2k / (2k (2k-1)) for k = 1..8.
  static constexpr double kCoef[] = {
      1.0 / 12.0,         -1.0 / 360.0,        1.0 / 1260.0,       -1.0 / 1680.0,
      1.0 / 1188.0,       -691.0 / 360360.0,   1.0 / 156.0,        -3617.0 / 122400.0,
  };
  const std::complex<double> inv = 1.0 / z;
  const std::complex<double> inv2 = inv * inv;
  std::complex<double> sum = 0.0;
  std::complex<double> p = inv;
  for (double c : kCoef) {
    sum += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + sum;
}

}  // namespace detail

/// Principal-ish log Gamma for complex arguments; its imaginary part is only
/// defined modulo 2*pi, which is all the Mellin-Barnes integrand needs.
inline std::complex<double> log_gamma(std::complex<double> z) {
  constexpr double kStirlingRadius = 16.0;
  if (z.real() < 0.5) {
    return std::log(std::numbers::pi) - detail::log_sin_pi(z) - log_gamma(1.0 - z);
  }
  // Recurrence up to the Stirling radius; one log of the running product
  // (at most 16 factors, so it cannot overflow).
  std::complex<double> prod = 1.0;
  bool shifted = false;
  while (std::norm(z) < kStirlingRadius * kStirlingRadius) {
    prod *= z;
    z += 1.0;
    shifted = true;
  }
  const std::complex<double> g = detail::log_gamma_stirling(z);
  return shifted ? g - std::log(prod) : g;
}

/// Piecewise-linear interpolation, clamped to the end values outside the table.
inline double interp_table(std::span<const double> xs, std::span<const double> ys, double x) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw Error(ErrorCode::MismatchedLengths, "interp_table needs matching tables of length >= 2");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw Error(ErrorCode::DomainError, "interp_table abscissae must be strictly increasing");
    }
  }
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const std::size_t hi = static_cast<std::size_t>(it - xs.begin());
  const std::size_t lo = hi - 1;
  const double t = (x - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

}  // namespace mrrfso::specfun
