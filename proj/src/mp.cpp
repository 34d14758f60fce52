// SPDX-License-Identifier: Apache-2.0
#include "qw/mp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace qw::mp {

double Real::log2_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

int lattice_order(double q) {
  if (!(q > 0.0 && q < 1.0)) return 0;
  for (int m = 1; m <= 64; ++m)
    if (std::fabs(1.0 - q - std::pow(q, m)) < 1e-13) return m;
  return 0;
}

Real base(double q, long bits) {
  static std::map<std::pair<double, long>, Real> cache;
  const auto key = std::make_pair(q, bits);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  Real x(bits + 32, q);
  if (const int m = lattice_order(q); m > 1) {
    // Newton on g(x) = 1 - x - x^m.
    Real g(bits + 32), d(bits + 32), xm(bits + 32);
    for (int it = 0; it < 200; ++it) {
      mpfr_pow_ui(xm.get(), x.get(), static_cast<unsigned long>(m - 1), MPFR_RNDN);
      mpfr_mul_ui(d.get(), xm.get(), static_cast<unsigned long>(m), MPFR_RNDN);
      mpfr_add_ui(d.get(), d.get(), 1, MPFR_RNDN);
      mpfr_mul(xm.get(), xm.get(), x.get(), MPFR_RNDN);
      mpfr_ui_sub(g.get(), 1, x.get(), MPFR_RNDN);
      mpfr_sub(g.get(), g.get(), xm.get(), MPFR_RNDN);
      mpfr_div(g.get(), g.get(), d.get(), MPFR_RNDN);
      mpfr_add(x.get(), x.get(), g.get(), MPFR_RNDN);
      if (mpfr_zero_p(g.get()) || g.log2_abs() < x.log2_abs() - static_cast<double>(bits) - 16.0) break;
    }
  }
  Real r(bits);
  mpfr_set(r.get(), x.get(), MPFR_RNDN);
  cache.emplace(key, r);
  return r;
}

Real one_minus(double q, long bits) {
  Real b = base(q, bits + 8);
  Real r(bits);
  mpfr_ui_sub(r.get(), 1, b.get(), MPFR_RNDN);
  return r;
}

Real pow_int(double q, long k, long bits) {
  Real r(bits);
  Real b = base(q, bits + 16);
  mpfr_pow_si(r.get(), b.get(), k, MPFR_RNDN);
  return r;
}

Real pow_real(double q, double y, long bits) {
  Real r(bits);
  Real b = base(q, bits + 16);
  Real e(bits, y);
  mpfr_pow(r.get(), b.get(), e.get(), MPFR_RNDN);
  return r;
}

double bessel_log2_max_term(double alpha, double absx, double q) {
  if (absx == 0.0) return 0.0;
  const double lq = std::log2(q);
  const double l1q = std::log2(1.0 - q);
  const double lx = std::log2(absx);
  double lt = 0.0;
  double best = 0.0;
  for (int n = 0; n < 100000; ++n) {
    // log2 of the ratio |t_{n+1}/t_n|
    const double a = 1.0 - std::pow(q, 2.0 * alpha + 2.0 * n + 2.0);
    const double b = 1.0 - std::pow(q, 2.0 * n + 2.0);
    const double lr = (2.0 * n + 2.0) * lq + 2.0 * l1q + 2.0 * lx - std::log2(a) - std::log2(b);
    lt += lr;
    best = std::max(best, lt);
    if (lr < -1.0 && lt < best - 64.0) break;
  }
  return best;
}

namespace {

// Series sum at fixed working precision.  Stops when the next term is
// below 2^-(work+8) relative to the largest term seen.
void series_at(Real& out, double alpha, const Real& x, double q, long work) {
  Real x2(work), c(work), Q(work), Qn(work), Qa(work), t(work), s(work), tmp(work), den(work);
  mpfr_sqr(x2.get(), x.get(), MPFR_RNDN);
  c = one_minus(q, work);
  mpfr_sqr(c.get(), c.get(), MPFR_RNDN);
  mpfr_mul(c.get(), c.get(), x2.get(), MPFR_RNDN);  // (1-q)^2 x^2
  Q = base(q, work);
  mpfr_sqr(Q.get(), Q.get(), MPFR_RNDN);
  Qa = pow_real(q, 2.0 * alpha + 2.0, work);
  mpfr_set(Qn.get(), Q.get(), MPFR_RNDN);  // Q^(n+1)
  mpfr_set_d(t.get(), 1.0, MPFR_RNDN);
  mpfr_set_d(s.get(), 1.0, MPFR_RNDN);
  double lmax = 0.0;
  for (long n = 0; n < 1000000; ++n) {
    // t *= -Q^(n+1) c / ((1 - Qa Q^n)(1 - Q^(n+1)))
    mpfr_mul(t.get(), t.get(), Qn.get(), MPFR_RNDN);
    mpfr_mul(t.get(), t.get(), c.get(), MPFR_RNDN);
    mpfr_neg(t.get(), t.get(), MPFR_RNDN);
    mpfr_ui_sub(den.get(), 1, Qn.get(), MPFR_RNDN);
    mpfr_div(tmp.get(), Qn.get(), Q.get(), MPFR_RNDN);
    mpfr_mul(tmp.get(), tmp.get(), Qa.get(), MPFR_RNDN);
    mpfr_ui_sub(tmp.get(), 1, tmp.get(), MPFR_RNDN);
    mpfr_mul(den.get(), den.get(), tmp.get(), MPFR_RNDN);
    mpfr_div(t.get(), t.get(), den.get(), MPFR_RNDN);
    mpfr_add(s.get(), s.get(), t.get(), MPFR_RNDN);
    mpfr_mul(Qn.get(), Qn.get(), Q.get(), MPFR_RNDN);
    if (mpfr_zero_p(t.get())) break;
    const double lt = t.log2_abs();
    lmax = std::max(lmax, lt);
    // Past the peak the ratio decreases monotonically, so a term this far
    // below the peak bounds the tail.
    if (lt < lmax - static_cast<double>(work) - 8.0 && mpfr_cmp_d(Qn.get(), 0.25) < 0) break;
  }
  mpfr_set_prec(out.get(), mpfr_get_prec(s.get()));
  mpfr_set(out.get(), s.get(), MPFR_RNDN);
}

}  // namespace

namespace {

template <class MakeX>
Real bessel_adaptive(double alpha, double absx, double q, long bits, MakeX make_x) {
  const double lmax = bessel_log2_max_term(alpha, absx, q);
  long work = bits + static_cast<long>(2.0 * lmax) + 64;
  Real v(work);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Real xw = make_x(work);
    series_at(v, alpha, xw, q, work);
    const double lost = lmax - v.log2_abs();
    if (v.is_zero() || lost + static_cast<double>(bits) + 32.0 > static_cast<double>(work)) {
      work = std::max(2 * work, static_cast<long>(lost) + bits + 96);
      continue;
    }
    break;
  }
  Real r(bits);
  mpfr_set(r.get(), v.get(), MPFR_RNDN);
  return r;
}

}  // namespace

Real bessel_j(double alpha, const Real& x, double q, long bits) {
  // x is used as given; its own precision limits the attainable accuracy.
  return bessel_adaptive(alpha, std::fabs(x.to_double()), q, bits, [&](long work) {
    Real xw(std::max(work, x.bits()));
    mpfr_set(xw.get(), x.get(), MPFR_RNDN);
    return xw;
  });
}

Real bessel_j_lattice(double alpha, long k, double q, long bits) {
  return bessel_adaptive(alpha, std::pow(q, static_cast<double>(k)), q, bits,
                         [&](long work) { return pow_int(q, k, work); });
}

double bessel_j_real(double alpha, double x, double q) {
  const double lmax = bessel_log2_max_term(alpha, std::fabs(x), q);
  if (lmax < 6.0) {
    // Terms never exceed 64 and alternate with a decreasing ratio past the
    // peak; double summation is accurate to a few ulps of max(1, |sum|).
    const double Q = q * q;
    const double c = (1.0 - q) * (1.0 - q) * x * x;
    const double Qa = std::pow(q, 2.0 * alpha + 2.0);
    double t = 1.0, s = 1.0, Qn = Q, Qm = 1.0;
    for (int n = 0; n < 10000; ++n) {
      t *= -Qn * c / ((1.0 - Qa * Qm) * (1.0 - Qn));
      s += t;
      Qm = Qn;
      Qn *= Q;
      if (std::fabs(t) < 1e-19 * std::max(1.0, std::fabs(s)) && Qn < 0.25) break;
    }
    if (std::log2(std::fabs(s)) > lmax - 3.0) return s;
  }
  Real xr(64, x);
  return bessel_j(alpha, xr, q, 60).to_double();
}

}  // namespace qw::mp
