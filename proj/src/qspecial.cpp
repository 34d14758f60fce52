// SPDX-License-Identifier: Apache-2.0
#include "qw/qspecial.hpp"

#include <algorithm>
#include <cmath>

namespace qw {

SeriesValue bessel_j(double alpha, cplx x, const QParams& p, const TruncationPolicy& pol) {
  p.validate();
  pol.validate();
  if (alpha < -0.5) throw InvalidParams("bessel_j needs alpha >= -1/2");
  const double q = p.q;
  const double Q = q * q;
  const double Qa = std::pow(q, 2.0 * alpha + 2.0);
  const cplx c = (1.0 - q) * (1.0 - q) * x * x;
  const double absc = std::abs(c);

  SeriesValue out;
  cplx t = 1.0;
  cplx s = 1.0;
  double Qn = Q;   // Q^{n+1}
  double Qm = 1.0; // Q^n
  std::size_t n = 0;
  for (; n < 100000; ++n) {
    const double den = (1.0 - Qa * Qm) * (1.0 - Qn);
    const double ratio = Qn * absc / den;
    t *= -Qn * c / den;
    s += t;
    Qm = Qn;
    Qn *= Q;
    // The ratio |t_{k+1}/t_k| decreases in k, so once it is below 1 the
    // tail is dominated by a geometric series.
    const double next_ratio = Qn * absc / ((1.0 - Qa * Qm) * (1.0 - Qn));
    if (ratio < 1.0 && next_ratio < 1.0) {
      const double tail = std::abs(t) * next_ratio / (1.0 - next_ratio);
      if (tail < pol.series_tol || std::abs(t) == 0.0) {
        out.est_tail = tail;
        break;
      }
    }
  }
  out.value = s;
  out.terms_used = n + 2;
  return out;
}

cplx qcos(cplx x, const QParams& p, const TruncationPolicy& pol) {
  return bessel_j(-0.5, x, p, pol).value;
}

cplx qsin(cplx x, const QParams& p, const TruncationPolicy& pol) {
  return x * bessel_j(0.5, x, p, pol).value;
}

cplx qexp(cplx z, const QParams& p, const TruncationPolicy& pol) {
  const cplx w = cplx(0.0, -1.0) * z;
  return qcos(w, p, pol) + cplx(0.0, 1.0) * qsin(w, p, pol);
}

double bessel_coefficient(double alpha, std::size_t n, const QParams& p) {
  p.validate();
  const double q = p.q;
  const double Q = q * q;
  double a = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    a *= -std::pow(Q, static_cast<double>(k + 1)) * (1.0 - q) * (1.0 - q) /
         ((1.0 - std::pow(q, 2.0 * alpha + 2.0 * k + 2.0)) * (1.0 - std::pow(Q, static_cast<double>(k + 1))));
  }
  return a;
}

double qexp_coefficient(std::size_t n, const QParams& p) {
  p.validate();
  const double h = static_cast<double>(n / 2);
  return std::pow(p.q, h * (h + 1.0)) / qfactorial(n, p);
}

double sonine_weight(int p_index, double t, const QParams& p, const TruncationPolicy&) {
  p.validate();
  if (p_index < 1) throw InvalidParams("sonine_weight needs p >= 1");
  const double Q = p.q * p.q;
  return qpoch(t * t * Q, Q, static_cast<std::size_t>(p_index - 1));
}

}  // namespace qw
