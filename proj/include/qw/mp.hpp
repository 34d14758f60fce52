// SPDX-License-Identifier: Apache-2.0
// Minimal RAII wrapper over mpfr_t.  Precision is always explicit.
#pragma once

#include <mpfr.h>

#include <cmath>
#include <utility>
#include <vector>

namespace qw::mp {

class Real {
 public:
  Real() : Real(64) {}
  explicit Real(long bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }
  Real(long bits, double x) { mpfr_init2(v_, bits); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept {
    // Leave the moved-from object holding a valid tiny value.
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Real() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  /// log2|x| (minus infinity for zero).
  double log2_abs() const;

 private:
  mpfr_t v_;
};

/// Order m when q is within 1e-13 of the root of 1 - q = q^m (m <= 64), else 0.
int lattice_order(double q);
/// q at `bits` precision.  A double that lattice_order recognizes is
/// replaced by the root itself: kernel values at large arguments amplify
/// any error in q by the size of the largest series term.
Real base(double q, long bits);
/// 1 - q at `bits` precision, with the same substitution.
Real one_minus(double q, long bits);

/// q^k as an exact-as-possible MP value.
Real pow_int(double q, long k, long bits);
/// q^y for real y.
Real pow_real(double q, double y, long bits);

/// Normalized q-Bessel j_alpha(x;q^2) with x real.  Precision of the
/// result is `bits`; internal precision is raised adaptively so that the
/// result carries at least `bits` correct bits despite cancellation.
Real bessel_j(double alpha, const Real& x, double q, long bits);

/// j_alpha(q^k;q^2) with the argument generated at working precision.
Real bessel_j_lattice(double alpha, long k, double q, long bits);

/// j_alpha(x;q^2) for real x rounded to double.  Falls back to MPFR when
/// the double series would lose more than a few digits to cancellation.
double bessel_j_real(double alpha, double x, double q);

/// log2 of the largest term of the j_alpha series at |x|.
double bessel_log2_max_term(double alpha, double absx, double q);

}  // namespace qw::mp
