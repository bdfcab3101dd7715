#pragma once

// Adaptive one-dimensional quadrature built on a fixed Gauss-Kronrod pair.
// Tolerances are absolute-or-relative so oscillatory integrands with heavy
// cancellation do not force unbounded refinement.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mrrfso::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;
};

namespace detail {

template <class F>
Result gk(const F& f, double a, double b) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  Result r;
  r.value = GK::integrate(f, a, b, 0, 0.0, &r.error, &r.l1);
  // Boost reports the error of the rule on [-1, 1] without the (b - a) / 2
  // Jacobian that it does apply to the value and the L1 norm.
  r.error *= 0.5 * (b - a);
  return r;
}

// Bisects until each piece meets its share of the absolute target.
template <class F>
Result adapt(const F& f, double a, double b, const Result& est, double tol, int depth) {
  // Below ~100 ulp of the L1 mass the error estimate is roundoff, not truncation.
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * est.l1;
  if (depth <= 0 || est.error <= std::max(tol, floor)) return est;
  const double mid = 0.5 * (a + b);
  const Result left = adapt(f, a, mid, gk(f, a, mid), 0.5 * tol, depth - 1);
  const Result right = adapt(f, mid, b, gk(f, mid, b), 0.5 * tol, depth - 1);
  return {left.value + right.value, left.error + right.error, left.l1 + right.l1};
}

}  // namespace detail

/// Integral of f over the finite interval [a, b]. The relative tolerance
/// refers to the whole integral, not to each subinterval.
template <class F>
Result integrate(const F& f, double a, double b, double abs_tol, double rel_tol = 1e-10, int max_depth = 24) {
  if (a == b) return {};
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  const Result first = detail::gk(f, lo, hi);
  Result r = detail::adapt(f, lo, hi, first, std::max(abs_tol, rel_tol * std::abs(first.value)), max_depth);
  if (a > b) r.value = -r.value;
  return r;
}

/// Integral over [a, b] split at the given interior points.
template <class F, class Range>
Result integrate_pieces(const F& f, const Range& breaks, double abs_tol, double rel_tol = 1e-10,
                        int max_depth = 24) {
  Result total;
  auto it = std::begin(breaks);
  auto end = std::end(breaks);
  if (it == end) return total;
  double prev = *it++;
  for (; it != end; ++it) {
    const Result r = integrate(f, prev, *it, abs_tol, rel_tol, max_depth);
    total.value += r.value;
    total.error += r.error;
    total.l1 += r.l1;
    prev = *it;
  }
  return total;
}

}  // namespace mrrfso::quad
