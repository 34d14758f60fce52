// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace qw {

using cplx = std::complex<double>;

struct InvalidParams : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PoleError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Deformation parameter q in (0,1) and Bessel index alpha >= -1/2.
struct QParams {
  double q = 0.5;
  double alpha = 0.0;

  QParams() = default;
  QParams(double q_, double alpha_) : q(q_), alpha(alpha_) { validate(); }

  void validate() const;
  double log_q() const { return std::log(q); }
  /// Same alpha, base q^2.
  QParams squared() const;
};

/// Point sign * q^exponent of the lattice R_q.
struct LatticePoint {
  int sign = 1;
  int exponent = 0;

  double value(double q) const { return sign * std::pow(q, exponent); }
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
};

struct TruncationPolicy {
  int n_min = -64;
  int n_max = 64;
  double product_tol = 1e-18;
  double series_tol = 1e-17;

  void validate() const;
};

struct infinity_t {
  explicit constexpr infinity_t() = default;
};
inline constexpr infinity_t infinity{};

// Finite and truncated infinite q-Pochhammer symbols with an explicit base.
cplx qpoch(cplx x, double base, std::size_t n);
double qpoch(double x, double base, std::size_t n);
cplx qpoch_inf(cplx x, double base, double product_tol = 1e-18);
double qpoch_inf(double x, double base, double product_tol = 1e-18);

/// (x;q)_n
cplx qshifted(cplx x, std::size_t n, const QParams& p, const TruncationPolicy& pol = {});
/// (x;q)_inf, truncated once |x q^k| < product_tol.
cplx qshifted(cplx x, infinity_t, const QParams& p, const TruncationPolicy& pol = {});

/// [x]_q = (1 - q^x)/(1 - q)
double qbracket(double x, const QParams& p);
double qbracket_base(double x, double base);
/// [n]_q! = (q;q)_n / (1-q)^n
double qfactorial(std::size_t n, const QParams& p);

/// Gamma_q(x) = (q;q)_inf / (q^x;q)_inf * (1-q)^(1-x).  Throws PoleError at x = 0,-1,-2,...
double qgamma(double x, const QParams& p, const TruncationPolicy& pol = {});
double qgamma_base(double x, double base, double product_tol = 1e-18);

}  // namespace qw
