// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracle.hpp"
#include "qw/mp.hpp"
#include "qw/qspecial.hpp"

using namespace qw;

TEST_CASE("j_alpha at the origin and its bound") {
  const QParams p(0.5, 0.0);
  for (double a : {-0.5, 0.0, 0.5, 1.5}) CHECK(std::abs(bessel_j(a, 0.0, p).value - 1.0) == 0.0);
  const double bound = 1.0 / oracle::qq_inf_half;
  for (double a : {-0.5, 0.0, 0.5})
    for (int k = -30; k <= 20; ++k) CHECK(std::fabs(mp::bessel_j_real(a, std::pow(0.5, k), 0.5)) <= bound);
}

TEST_CASE("sin is x j_{1/2}, cos is j_{-1/2}") {
  const QParams p(0.5, 0.0);
  for (double x : {0.1, 0.7, 1.3, 2.0, 3.5}) {
    CHECK(std::abs(qsin(x, p) - x * bessel_j(0.5, x, p).value) < 1e-12);
    CHECK(std::abs(qsin(-x, p) + qsin(x, p)) == 0.0);
  }
  CHECK(std::abs(qcos(0.0, p) - 1.0) == 0.0);
}

TEST_CASE("series against an independent extended-precision sum") {
  const QParams p(0.5, 0.0);
  CHECK(qexp(0.3, p).real() == doctest::Approx(oracle::qexp_03_half).epsilon(1e-14));
  CHECK(std::fabs(qexp(0.3, p).imag()) < 1e-16);
  // e(z) Taylor coefficients against the plain loop in the oracle
  for (std::size_t n = 0; n < 12; ++n) {
    oracle::big fact = 1;
    for (std::size_t k = 1; k <= n; ++k) fact *= (1 - pow(oracle::big("0.5"), static_cast<int>(k))) / oracle::big("0.5");
    const int h = static_cast<int>(n / 2);
    const double ref = static_cast<double>(pow(oracle::big("0.5"), h * (h + 1)) / fact);
    CHECK(qexp_coefficient(n, p) == doctest::Approx(ref).epsilon(1e-14));
  }
}

TEST_CASE("|e(ix)| stays below 2/(q;q)_inf on the lattice") {
  const double bound = 2.0 / oracle::qq_inf_half;
  for (int k = -40; k <= 20; ++k) {
    const double x = std::pow(0.5, k);
    const double c = mp::bessel_j_real(-0.5, x, 0.5), s = x * mp::bessel_j_real(0.5, x, 0.5);
    CHECK(std::hypot(c, s) <= bound);
  }
}

TEST_CASE("Bessel coefficients match the series") {
  const QParams p(0.7, 0.5);
  const double x = 0.9;
  double s = 0.0;
  for (std::size_t n = 0; n < 40; ++n) s += bessel_coefficient(0.5, n, p) * std::pow(x, 2.0 * static_cast<double>(n));
  CHECK(s == doctest::Approx(bessel_j(0.5, x, p).value.real()).epsilon(1e-14));
}

TEST_CASE("Sonine weight") {
  const QParams p(0.5, 0.0);
  CHECK(sonine_weight(3, 0.0, p) == 1.0);
  CHECK(sonine_weight(2, 0.5, p) == doctest::Approx(oracle::sonine_w1_half).epsilon(1e-15));
  // the quotient of infinite products, evaluated directly
  const double direct = static_cast<double>(oracle::sonine_weight(2, oracle::big("0.5"), oracle::big("0.5")));
  CHECK(sonine_weight(2, 0.5, p) == doctest::Approx(direct).epsilon(1e-15));
  // for p = 1 every factor cancels
  for (double t : {0.0, 0.3, 1.0}) CHECK(sonine_weight(1, t, p) == 1.0);
  CHECK_THROWS_AS(sonine_weight(0, 0.5, p), InvalidParams);
}

TEST_CASE("MP Bessel agrees with the double series where both are accurate") {
  for (double a : {-0.5, 0.0, 0.5})
    for (double x : {0.25, 1.0, 3.0}) {
      const double d = bessel_j(a, x, QParams(0.5, a)).value.real();
      CHECK(mp::bessel_j_real(a, x, 0.5) == doctest::Approx(d).epsilon(1e-13));
    }
}

TEST_CASE("q on the admissible lattice is snapped to the exact root") {
  CHECK(mp::lattice_order(0.5) == 1);
  CHECK(mp::lattice_order(0.7244919590005157) == 4);
  CHECK(mp::lattice_order(0.90044532576199) == 22);
  CHECK(mp::lattice_order(0.7) == 0);
  CHECK(mp::lattice_order(0.9) == 0);
  // 1 - q - q^m vanishes at working precision
  const long bits = 256;
  const mp::Real Q = mp::base(0.90044532576199, bits);
  mp::Real r(bits), qm(bits);
  mpfr_pow_ui(qm.get(), Q.get(), 22, MPFR_RNDN);
  mpfr_ui_sub(r.get(), 1, Q.get(), MPFR_RNDN);
  mpfr_sub(r.get(), r.get(), qm.get(), MPFR_RNDN);
  CHECK(r.log2_abs() < -240.0);
}
