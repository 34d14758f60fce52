// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "qw/corpus.hpp"
#include "qw/paleywiener.hpp"

using namespace qw;

namespace {
const QParams P(0.5, 0.0);
const LatticeWindow XW(-4, 8, -4, 8);
}  // namespace

TEST_CASE("support radius") {
  CHECK(support_radius(GridFunction(P, XW)) == 0.0);
  const GridFunction e = point_mass(P, XW, -1, 1, 2);
  CHECK(support_radius(e) == doctest::Approx(std::hypot(0.5, 0.25)).epsilon(1e-15));
  GridFunction two = e;
  two.at(1, -1, 0) = 0.5;
  CHECK(support_radius(two) == doctest::Approx(std::hypot(2.0, 1.0)).epsilon(1e-15));
}

TEST_CASE("norm growth sequence") {
  const auto z = norm_growth_sequence(GridFunction(P, XW), 5);
  for (double v : z) CHECK(v == 0.0);

  const int n1 = -1, n2 = 1;
  const GridFunction e = point_mass(P, XW, 1, n1, n2);
  const double r = std::hypot(2.0, 0.5), w = 0.25 * std::pow(0.5, n1 + 2 * n2);
  const auto b = norm_growth_sequence(e, 20);
  for (int n = 1; n <= 20; ++n) CHECK(b[n - 1] == doctest::Approx(r * std::pow(w, 1.0 / (4.0 * n))).epsilon(1e-13));

  const GridFunction f = random_even_function(P, XW, LatticeWindow(-2, 6, -2, 6), 4);
  const double R = support_radius(f);
  CHECK(std::fabs(norm_growth_sequence(f, 50).back() - R) <= 0.02 * R);
  CHECK(extrapolate_radius(norm_growth_sequence(f, 50)) == doctest::Approx(R).epsilon(1e-3));
  CHECK_THROWS_AS(norm_growth_sequence(f, 0), InvalidParams);
}

TEST_CASE("bandwidth of a transformed point mass") {
  const GridFunction e = point_mass(P, XW, 1, 1, 0);
  const auto F = forward_auto(e);
  BandwidthOptions opt;
  const auto rep = bandwidth_estimate(F.grid, 8, opt);
  const double r = std::hypot(0.5, 1.0);
  CHECK(rep.oracle_radius == doctest::Approx(r).epsilon(1e-12));
  CHECK(rep.estimate_spectral == doctest::Approx(r).epsilon(1e-6));
  CHECK(rep.routes_agree);
  CHECK(rep.route_disagreement <= 1e-6);
  CHECK(rep.reading == "radius");

  const auto zero = bandwidth_estimate(GridFunction(P, F.grid.window()), 5);
  CHECK(zero.estimate == 0.0);
  CHECK_THROWS_AS(bandwidth_estimate(F.grid, 0), InvalidParams);
}

TEST_CASE("bandwidth stays below the support radius") {
  const GridFunction f = random_even_function(P, XW, LatticeWindow(-1, 5, 0, 5), 12);
  const double a = support_radius(f);
  BandwidthOptions opt;
  opt.literal = false;
  const auto rep = bandwidth_estimate(forward_auto(f).grid, 30, opt);
  CHECK(rep.estimate <= a * (1.0 + 1e-6));
  CHECK(rep.a_seq.empty());
}

TEST_CASE("PW^m seminorm") {
  for (int n = 1; n < 6; ++n) CHECK(pw_B(n, 0, 0.5) == 1.0);
  const int m = 2;
  const GridFunction f = random_bump(P, XW, LatticeWindow(0, 4, 0, 4), 3);
  const double R = support_radius(f);
  PWmParams prm{m, R / std::pow(P.q, 4 * m), 2 * m + 2};
  const auto F = forward_auto(f);
  const auto rep = pw_m_sup(F.grid, prm);
  REQUIRE(rep.log_value.size() == rep.log_bound.size());
  for (std::size_t i = 0; i < rep.log_value.size(); ++i) CHECK(rep.log_value[i] <= rep.log_bound[i]);
  CHECK(std::isfinite(rep.sup));

  const auto z = pw_m_sup(GridFunction(P, F.grid.window()), prm);
  CHECK(z.sup == 0.0);
  CHECK_THROWS_AS(PWmParams({1, 1.0, 5}).validate(0.0), InvalidParams);
}

TEST_CASE("monomial derivative bound") {
  const auto zero = monomial_derivative_bound_check(GridFunction(P, XW), 2, 2, 1, 1, 1);
  CHECK(zero.lhs == 0.0);
  CHECK(zero.ok());
  const GridFunction f = random_bump(P, XW, LatticeWindow(0, 4, 0, 4), 5);
  const double R = support_radius(f);
  const auto r = monomial_derivative_bound_check(f, 2, 2, 1, 1, 1);
  CHECK(r.ok());
  CHECK(r.lhs > 0.0);
  CHECK(r.support <= R / 0.5 * (1.0 + 1e-12));
  const auto c = corollary_bound_check(f, 2, 1, 0, 1);
  CHECK(c.ok());
}

TEST_CASE("Weinstein sup bound") {
  const GridFunction f = random_bump(QParams(0.5, 0.5), XW, LatticeWindow(0, 4, 0, 4), 6);
  const auto k0 = weinstein_sup_bound_check(f, 0);
  CHECK(k0.constant == 1.0);
  CHECK(k0.lhs == k0.rhs);
  CHECK(weinstein_sup_bound_check(f, 1).ok());
  CHECK(weinstein_sup_bound_check(f, 2).ok());

  // Delta f = d1^2 f + q^{2a+1} d2^2 f + ([2a+1]_q / y) d2 f, pointwise
  const GridFunction fp = f.resized(XW);
  const GridFunction D = weinstein_op(fp, 1);
  const GridFunction d11 = dq_mixed(fp, 2, 0), d22 = dq_mixed(fp, 0, 2), d2 = dq_mixed(fp, 0, 1);
  const double q = 0.5, k = 2.0;
  const double qb = (1.0 - std::pow(q, k)) / (1.0 - q);
  D.for_each([&](int s, int a, int b) {
    if (!D.window().untainted(a, b)) return;
    const cplx e = d11.at(s, a, b) + std::pow(q, k) * d22.at(s, a, b) + qb / std::pow(q, b) * d2.at(s, a, b);
    CHECK(std::abs(D.at(s, a, b) - e) <= 1e-12 * D.max_abs());
  });
}

TEST_CASE("Sonine identity") {
  // y = 0: j(0) = 1 against c times the integral of the weight
  CHECK(sonine_identity_check(0.5, 2, {0.0}, 0.5) <= 1e-8);
  const double q = 0.5;
  CHECK(sonine_identity_check(0.0, 1, {q * q, q, 1.0}, q) <= 1e-8);
  TruncationPolicy fine;
  fine.series_tol /= 2.0;
  const double a = sonine_identity_check(0.5, 2, {0.25, 1.0, 4.0}, q);
  const double b = sonine_identity_check(0.5, 2, {0.25, 1.0, 4.0}, q, fine);
  CHECK(std::fabs(a - b) < 1e-7);
  CHECK_THROWS_AS(sonine_identity_check(0.0, 0, {1.0}, q), InvalidParams);
}
