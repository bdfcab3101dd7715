#pragma once

// Meijer G-function of a positive real argument, evaluated by direct
// quadrature of its Mellin-Barnes integral
//
//   G^{m,n}_{p,q}(z | a; b) = 1/(2 pi i) \int_{c - i inf}^{c + i inf} Phi(s) z^{-s} ds,
//   Phi(s) = prod_{j<m} Gamma(b_j + s) prod_{i<n} Gamma(1 - a_i - s)
//          / ( prod_{j>=m} Gamma(1 - b_j - s) prod_{i>=n} Gamma(a_i + s) ).
//
// The vertical contour Re(s) = c separates the left poles (from the b_j,
// j < m) from the right poles (from the a_i, i < n). Coincident poles inside
// one family are harmless on a contour, so repeated parameters need no
// special treatment. c is placed at the minimum of |Phi(c) z^{-c}| on the
// admissible real segment, which is the saddle of the integrand and keeps
// cancellation small for both tiny and huge z.

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "mrrfso/error.hpp"
#include "mrrfso/quadrature.hpp"
#include "mrrfso/specfun.hpp"

namespace mrrfso {

/// Order (m, n) with parameter vectors a (length p) and b (length q).
struct MeijerGSpec {
  int m = 0;
  int n = 0;
  std::vector<double> a;
  std::vector<double> b;

  int p() const { return static_cast<int>(a.size()); }
  int q() const { return static_cast<int>(b.size()); }
};

struct MeijerGOptions {
  double rel_tol = 1e-12;
  double max_imag = 2.0e4;  // hard cap on the contour height
};

namespace detail {

class MellinBarnes {
 public:
  explicit MellinBarnes(const MeijerGSpec& spec) : spec_(spec) {}

  std::complex<double> log_phi(std::complex<double> s) const {
    std::complex<double> acc = 0.0;
    const int p = spec_.p();
    const int q = spec_.q();
    for (int j = 0; j < spec_.m; ++j) acc += specfun::log_gamma(spec_.b[j] + s);
    for (int i = 0; i < spec_.n; ++i) acc += specfun::log_gamma(1.0 - spec_.a[i] - s);
    for (int j = spec_.m; j < q; ++j) acc -= specfun::log_gamma(1.0 - spec_.b[j] - s);
    for (int i = spec_.n; i < p; ++i) acc -= specfun::log_gamma(spec_.a[i] + s);
    return acc;
  }

  // log|Phi(c)| for real c, using real lgamma (sign dropped).
  double log_abs_phi(double c) const {
    double acc = 0.0;
    const int p = spec_.p();
    const int q = spec_.q();
    for (int j = 0; j < spec_.m; ++j) acc += std::lgamma(spec_.b[j] + c);
    for (int i = 0; i < spec_.n; ++i) acc += std::lgamma(1.0 - spec_.a[i] - c);
    for (int j = spec_.m; j < q; ++j) acc -= std::lgamma(1.0 - spec_.b[j] - c);
    for (int i = spec_.n; i < p; ++i) acc -= std::lgamma(spec_.a[i] + c);
    return acc;
  }

  // Admissible open interval for the contour abscissa.
  std::pair<double, double> strip() const {
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int j = 0; j < spec_.m; ++j) lo = std::max(lo, -spec_.b[j]);
    for (int i = 0; i < spec_.n; ++i) hi = std::min(hi, 1.0 - spec_.a[i]);
    return {lo, hi};
  }

 private:
  const MeijerGSpec& spec_;
};

inline double golden_min(auto&& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

inline void validate(const MeijerGSpec& spec) {
  if (spec.m < 0 || spec.n < 0 || spec.m > spec.q() || spec.n > spec.p()) {
    throw Error(ErrorCode::InvalidOrder,
                "Meijer G order requires 0 <= m <= q and 0 <= n <= p (m=" + std::to_string(spec.m) +
                    ", n=" + std::to_string(spec.n) + ", p=" + std::to_string(spec.p()) +
                    ", q=" + std::to_string(spec.q()) + ")");
  }
}

/// G^{m,n}_{p,q}(z | a; b) for z > 0.
inline double meijer_g(const MeijerGSpec& spec, double z, const MeijerGOptions& opt = {}) {
  validate(spec);
  if (!(z > 0.0) || !std::isfinite(z)) {
    throw Error(ErrorCode::DomainError, "meijer_g requires a finite argument z > 0");
  }
  const double delta = spec.m + spec.n - 0.5 * (spec.p() + spec.q());
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::NonConvergent,
                "Mellin-Barnes contour integral diverges for m + n <= (p + q) / 2");
  }

  const detail::MellinBarnes mb(spec);
  auto [lo, hi] = mb.strip();
  if (!(lo < hi)) {
    throw Error(ErrorCode::DomainError,
                "Meijer G parameters have overlapping pole families (a_i - b_j is a positive integer or "
                "the strip is empty)");
  }

  const double log_z = std::log(z);
  auto psi = [&](double c) { return mb.log_abs_phi(c) - c * log_z; };

  // Keep the contour away from the pole rows bounding the strip.
  double margin = 0.25;
  if (std::isfinite(lo) && std::isfinite(hi)) margin = std::min(margin, 0.25 * (hi - lo));
  double left = std::isfinite(lo) ? lo + margin : -std::numeric_limits<double>::infinity();
  double right = std::isfinite(hi) ? hi - margin : std::numeric_limits<double>::infinity();

  if (!std::isfinite(right)) {
    double step = 1.0;
    double x = left + step;
    while (psi(x + step) < psi(x) && step < 1e7) {
      x += step;
      step *= 2.0;
    }
    right = x + step;
  }
  if (!std::isfinite(left)) {
    double step = 1.0;
    double x = right - step;
    while (psi(x - step) < psi(x) && step < 1e7) {
      x -= step;
      step *= 2.0;
    }
    left = x - step;
  }
  const double c = detail::golden_min(psi, left, right, 1e-4 * std::max(1.0, right - left));

  const double psi_c = psi(c);
  const std::complex<double> log_phi_c = mb.log_phi(std::complex<double>(c, 0.0));
  // Integrand scaled by exp(-psi(c)); its value at t = 0 has modulus one.
  auto integrand = [&](double t) {
    const std::complex<double> s(c, t);
    const std::complex<double> e = mb.log_phi(s) - s * log_z - (log_phi_c.real() - c * log_z);
    if (e.real() < -745.0) return 0.0;
    return std::exp(e.real()) * std::cos(e.imag());
  };

  double total = 0.0;
  double total_l1 = 0.0;
  double t0 = 0.0;
  double step = std::max(0.5, std::min(4.0, 2.0 * std::numbers::pi / (std::abs(log_z) + 1.0)));
  int quiet_segments = 0;
  while (true) {
    const double abs_tol = 1e-1 * opt.rel_tol * std::max(1.0, total_l1);
    const quad::Result seg = quad::integrate(integrand, t0, t0 + step, abs_tol, 0.0, 16);
    total += seg.value;
    total_l1 += seg.l1;
    t0 += step;
    if (seg.l1 <= 1e-3 * opt.rel_tol * total_l1) {
      if (++quiet_segments >= 2) break;
    } else {
      quiet_segments = 0;
    }
    if (t0 > opt.max_imag) {
      throw Error(ErrorCode::NonConvergent, "Mellin-Barnes integrand did not decay within the contour cap");
    }
    if (step < 4.0) step *= 1.25;
  }
  if (total == 0.0) return 0.0;
  const double sign = total > 0.0 ? 1.0 : -1.0;
  const double log_mag = psi_c + std::log(std::abs(total)) - std::log(std::numbers::pi);
  if (log_mag < -745.0) return 0.0;
  return sign * std::exp(log_mag);
}

/// Reciprocal-argument identity: G^{m,n}_{p,q}(z|a;b) = G^{n,m}_{q,p}(1/z | 1-b; 1-a).
inline MeijerGSpec reciprocal(const MeijerGSpec& spec) {
  MeijerGSpec out;
  out.m = spec.n;
  out.n = spec.m;
  for (double bj : spec.b) out.a.push_back(1.0 - bj);
  for (double ai : spec.a) out.b.push_back(1.0 - ai);
  return out;
}

}  // namespace mrrfso
