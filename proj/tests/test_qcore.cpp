// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracle.hpp"
#include "qw/qcore.hpp"

using namespace qw;

TEST_CASE("params are validated") {
  CHECK_THROWS_AS(QParams(0.0, 0.0), InvalidParams);
  CHECK_THROWS_AS(QParams(1.0, 0.0), InvalidParams);
  CHECK_THROWS_AS(QParams(0.5, -0.6), InvalidParams);
  CHECK_NOTHROW(QParams(0.5, -0.5));
  TruncationPolicy bad;
  bad.n_min = 3;
  bad.n_max = 3;
  CHECK_THROWS_AS(bad.validate(), InvalidParams);
}

TEST_CASE("q-shifted factorial") {
  const QParams p(0.5, 0.0);
  CHECK(qshifted(cplx(0.37, -1.2), 0, p) == cplx(1.0, 0.0));
  CHECK(std::abs(qshifted(0.0, infinity, p) - 1.0) == 0.0);
  CHECK(qshifted(0.5, infinity, p).real() == doctest::Approx(oracle::qq_inf_half).epsilon(1e-15));
  // finite products stop at the requested length
  CHECK(qshifted(0.5, 3, p).real() == doctest::Approx(0.5 * 0.75 * 0.875).epsilon(1e-15));
  // a factor hits zero at x = q^{-k}
  CHECK(std::abs(qshifted(4.0, 4, p)) == 0.0);
}

TEST_CASE("brackets and factorials") {
  const QParams p(0.5, 0.0);
  CHECK(qbracket(1.0, p) == doctest::Approx(1.0).epsilon(1e-15));
  for (std::size_t n = 0; n <= 20; ++n) {
    const double viaPoch = qpoch(0.5, 0.5, n) / std::pow(0.5, static_cast<double>(n));
    CHECK(qfactorial(n, p) == doctest::Approx(viaPoch).epsilon(1e-14));
  }
  const QParams near1(1.0 - 1e-6, 0.0);
  CHECK(std::fabs(qbracket(3.0, near1) - 3.0) < 1e-5);
}

TEST_CASE("q-Gamma") {
  const QParams p(0.5, 0.0);
  CHECK(qgamma(1.0, p) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(qgamma(2.0, p) == doctest::Approx(1.0).epsilon(1e-14));
  for (double x : {0.5, 1.5, 2.5})
    CHECK(qgamma(x + 1.0, p) / (qbracket(x, p) * qgamma(x, p)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(qgamma(0.0, p), PoleError);
  CHECK_THROWS_AS(qgamma(-2.0, p), PoleError);
  // independent extended-precision product
  const double ref = static_cast<double>(oracle::qgamma(oracle::big("0.5"), oracle::big("0.25")));
  CHECK(qgamma_base(0.5, 0.25) == doctest::Approx(ref).epsilon(1e-14));
}
