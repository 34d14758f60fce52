// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "qw/qcore.hpp"

namespace qw {

struct SeriesValue {
  cplx value{0.0, 0.0};
  std::size_t terms_used = 0;
  double est_tail = 0.0;
};

/// Normalized third Jackson q-Bessel function j_alpha(x;q^2), double series.
///
/// term_n = (-1)^n Gamma_{q^2}(a+1) q^{n(n+1)} / (Gamma_{q^2}(a+n+1) Gamma_{q^2}(n+1)) (x/(1+q))^{2n}
///
/// so that j_alpha(0) = 1.  Consecutive terms satisfy
/// t_{n+1}/t_n = -q^{2n+2} (1-q)^2 x^2 / ((1-q^{2a+2n+2})(1-q^{2n+2})).
/// Summation continues past the peak term (near n ~ log|x|/log(1/q)) until
/// the geometric tail bound drops below policy.series_tol.
///
/// For large real arguments the sum is the difference of huge terms; use
/// mp::bessel_j_real or KernelTable there.
SeriesValue bessel_j(double alpha, cplx x, const QParams& p, const TruncationPolicy& pol = {});

/// cos(x;q^2) = j_{-1/2}(x;q^2)
cplx qcos(cplx x, const QParams& p, const TruncationPolicy& pol = {});
/// sin(x;q^2) = x j_{1/2}(x;q^2)
cplx qsin(cplx x, const QParams& p, const TruncationPolicy& pol = {});
/// e(z;q^2) = cos(-iz;q^2) + i sin(-iz;q^2)
cplx qexp(cplx z, const QParams& p, const TruncationPolicy& pol = {});

/// Taylor coefficient of x^{2n} in j_alpha(x;q^2).
double bessel_coefficient(double alpha, std::size_t n, const QParams& p);
/// Taylor coefficient of z^n in e(z;q^2): q^{floor(n/2) (floor(n/2)+1)} / [n]_q!  (all positive).
double qexp_coefficient(std::size_t n, const QParams& p);

/// Sonine weight W_{p-1}(t;q^2) = (t^2 q^2;q^2)_inf / (t^2 q^{2p};q^2)_inf = (t^2 q^2;q^2)_{p-1}.
/// The two infinite products share every factor beyond the first p-1, so
/// the quotient is evaluated as that finite product (exact at t = 1).
double sonine_weight(int p_index, double t, const QParams& p, const TruncationPolicy& pol = {});

}  // namespace qw
