// SPDX-License-Identifier: Apache-2.0
// Lattice operators in MPFR.
//
// Iterating the stencils on sampled transforms cancels catastrophically
// near the origin of the lambda lattice: every derivative divides a
// difference of nearly equal values by (1-q) lambda.  These routines carry
// the transform and its derivatives at a fixed precision chosen by
// plan_bits.
#pragma once

#include <optional>
#include <vector>

#include "qw/mp.hpp"
#include "qw/qops.hpp"

namespace qw::hp {

/// Complex samples on a lattice window, indexed like GridFunction.
class Grid {
 public:
  Grid(const QParams& p, const LatticeWindow& w, Parity par, long bits);

  const QParams& params() const { return params_; }
  const LatticeWindow& window() const { return window_; }
  Parity parity() const { return parity_; }
  long bits() const { return bits_; }

  std::size_t index(int s1, int n1, int n2) const {
    const std::size_t sb = s1 > 0 ? 0u : 1u;
    return (sb * static_cast<std::size_t>(window_.size1()) + static_cast<std::size_t>(n1 - window_.n1_min)) *
               static_cast<std::size_t>(window_.size2()) +
           static_cast<std::size_t>(n2 - window_.n2_min);
  }
  mp::Real& re(std::size_t i) { return re_[i]; }
  mp::Real& im(std::size_t i) { return im_[i]; }
  const mp::Real& re(std::size_t i) const { return re_[i]; }
  const mp::Real& im(std::size_t i) const { return im_[i]; }

  GridFunction to_double() const;

 private:
  QParams params_;
  LatticeWindow window_;
  Parity parity_;
  long bits_;
  std::vector<mp::Real> re_, im_;
};

/// Exponent box [n1_lo, n1_hi] x [n2_lo, n2_hi]; operators only compute
/// points inside it and leave zeros elsewhere.
struct Region {
  int n1_lo, n1_hi, n2_lo, n2_hi;
  bool contains(int a, int b) const { return a >= n1_lo && a <= n1_hi && b >= n2_lo && b <= n2_hi; }
};

/// Working precision for `derivs` successive q-derivatives of a transform
/// whose preimage has radius `radius`, accurate down to |lambda| = lambda_min.
/// An error e in a sample at lambda = q^k reaches the result multiplied by
/// the stencil factors 1/((1-q) q^j) along its path, at most
/// ((1-q) lambda_min)^{-d} q^{-d(d+1)/2}, against a result of size radius^d.
long plan_bits(double q, int derivs, double lambda_min, double radius, long target_bits);

/// Transform of a double grid function evaluated with an MPFR kernel table.
Grid forward_hp(const GridFunction& f, const LatticeWindow& lambda_window, long bits);

/// Partial q-derivative in the first variable.
Grid dx(const Grid& f, const std::optional<Region>& region = std::nullopt);
/// q-Bessel operator in the second variable (input even).
Grid bessel(const Grid& f, const std::optional<Region>& region = std::nullopt);
/// d_1^2 + B in one pass.
Grid delta(const Grid& f, const std::optional<Region>& region = std::nullopt);

/// log of the weighted L2 norm squared over the region (-inf if zero).
double log_norm_sq(const Grid& f, const Region& region);
/// log of |f| at each point of the region, -inf at zeros; calls fn(s, a, b, log|f|).
template <class Fn>
void for_each_log_abs(const Grid& f, const Region& r, Fn&& fn);

}  // namespace qw::hp

namespace qw::hp {

template <class Fn>
void for_each_log_abs(const Grid& f, const Region& r, Fn&& fn) {
  mp::Real t(64), u(64);
  for (int s : {1, -1})
    for (int a = r.n1_lo; a <= r.n1_hi; ++a)
      for (int b = r.n2_lo; b <= r.n2_hi; ++b) {
        const std::size_t i = f.index(s, a, b);
        mpfr_sqr(t.get(), f.re(i).get(), MPFR_RNDN);
        mpfr_sqr(u.get(), f.im(i).get(), MPFR_RNDN);
        mpfr_add(t.get(), t.get(), u.get(), MPFR_RNDN);
        fn(s, a, b, 0.5 * t.log2_abs() * std::log(2.0));
      }
}

}  // namespace qw::hp
