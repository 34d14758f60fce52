// SPDX-License-Identifier: Apache-2.0
#include "qw/qcore.hpp"

#include <limits>

namespace qw {

void QParams::validate() const {
  if (!(q > 0.0 && q < 1.0)) throw InvalidParams("q must lie in (0,1), got " + std::to_string(q));
  if (!(alpha >= -0.5)) throw InvalidParams("alpha must be >= -1/2, got " + std::to_string(alpha));
}

QParams QParams::squared() const {
  QParams r;
  r.q = q * q;
  r.alpha = alpha;
  return r;
}

void TruncationPolicy::validate() const {
  if (n_min >= n_max) throw InvalidParams("truncation window requires n_min < n_max");
  if (!(product_tol > 0.0) || !(series_tol > 0.0)) throw InvalidParams("tolerances must be positive");
}

cplx qpoch(cplx x, double base, std::size_t n) {
  cplx r = 1.0;
  double bk = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    r *= 1.0 - x * bk;
    bk *= base;
  }
  return r;
}

double qpoch(double x, double base, std::size_t n) {
  double r = 1.0;
  double bk = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    r *= 1.0 - x * bk;
    bk *= base;
  }
  return r;
}

namespace {

template <class T>
T qpoch_inf_impl(T x, double base, double tol) {
  if (!(base > 0.0 && base < 1.0)) throw InvalidParams("infinite q-Pochhammer needs base in (0,1)");
  T r = 1.0;
  T term = x;
  // Factors approach 1 geometrically; once |x b^k| < tol the remaining
  // product differs from 1 by less than tol/(1-b).
  for (int k = 0; k < 100000; ++k) {
    if (std::abs(term) < tol) break;
    r *= T(1.0) - term;
    term *= base;
  }
  return r;
}

}  // namespace

cplx qpoch_inf(cplx x, double base, double tol) { return qpoch_inf_impl<cplx>(x, base, tol); }
double qpoch_inf(double x, double base, double tol) { return qpoch_inf_impl<double>(x, base, tol); }

cplx qshifted(cplx x, std::size_t n, const QParams& p, const TruncationPolicy&) {
  p.validate();
  return qpoch(x, p.q, n);
}

cplx qshifted(cplx x, infinity_t, const QParams& p, const TruncationPolicy& pol) {
  p.validate();
  pol.validate();
  return qpoch_inf(x, p.q, pol.product_tol);
}

double qbracket_base(double x, double base) {
  return -std::expm1(x * std::log(base)) / (1.0 - base);
}

double qbracket(double x, const QParams& p) {
  p.validate();
  return qbracket_base(x, p.q);
}

double qfactorial(std::size_t n, const QParams& p) {
  p.validate();
  double r = 1.0;
  for (std::size_t k = 1; k <= n; ++k) r *= qbracket_base(static_cast<double>(k), p.q);
  return r;
}

double qgamma_base(double x, double base, double tol) {
  if (x <= 0.0 && x == std::floor(x)) throw PoleError("q-Gamma pole at x = " + std::to_string(x));
  const double qx = std::exp(x * std::log(base));
  const double num = qpoch_inf(base, base, tol);
  const double den = qpoch_inf(qx, base, tol);
  return num / den * std::pow(1.0 - base, 1.0 - x);
}

double qgamma(double x, const QParams& p, const TruncationPolicy& pol) {
  p.validate();
  pol.validate();
  return qgamma_base(x, p.q, pol.product_tol);
}

}  // namespace qw
