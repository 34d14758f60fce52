// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracle.hpp"
#include "qw/corpus.hpp"
#include "qw/qintegrate.hpp"
#include "qw/qops.hpp"
#include "qw/qspecial.hpp"
#include "qw/qweinstein.hpp"

using namespace qw;

namespace {

double max_abs_interior(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  a.for_each([&](int s, int x, int y) {
    if (a.window().untainted(x, y) && b.window().untainted(x, y)) m = std::max(m, std::abs(a.at(s, x, y) - b.value(s, x, 1, y)));
  });
  return m;
}

// Lambda_l on a window, with l = (s1 q^k1, q^k2).
GridFunction kernel_grid(const QParams& p, const LatticeWindow& w, int s1, int k1, int k2) {
  GridFunction g(p, w);
  g.for_each([&](int s, int a, int b) { g.at(s, a, b) = kernel_lattice({s1, k1}, {1, k2}, {s, a}, {1, b}, p); });
  return g;
}

}  // namespace

TEST_CASE("derivative of monomials") {
  const QParams p(0.5, 0.0);
  const auto x = LineFunction::sample(p, -3, 6, [](double t) { return cplx(t); });
  const auto x2 = LineFunction::sample(p, -3, 6, [](double t) { return cplx(t * t); });
  for (int n = -2; n <= 5; ++n)
    for (int s : {1, -1}) {
      const double z = s * std::pow(0.5, n);
      CHECK(std::abs(dq_1d(x, {s, n}) - 1.0) < 1e-14);
      CHECK(std::abs(dq_1d(x2, {s, n}) - 1.5 / 0.25 * z) < 1e-13 * std::fabs(z) * 6.0);
      CHECK(std::abs(dq_1d(x2, {s, n}) - dq_1d_split(x2, {s, n})) < 1e-13 * std::fabs(z) * 6.0);
    }
  CHECK_THROWS_AS(dq_1d(x, {1, -3}), TaintError);
}

TEST_CASE("e(x;q^2) is its own derivative") {
  const QParams p(0.5, 0.0);
  const auto e = LineFunction::sample(p, -4, 12, [&](double t) { return qexp(t, p); });
  for (int n = -3; n <= 11; ++n)
    for (int s : {1, -1}) {
      const cplx v = qexp(s * std::pow(0.5, n), p);
      CHECK(std::abs(dq_1d(e, {s, n}) - v) < 1e-10 * std::max(1.0, std::abs(v)));
    }
}

TEST_CASE("even/odd split") {
  const QParams p(0.5, 0.0);
  const auto f = LineFunction::sample(p, 0, 5, [](double t) { return cplx(t + t * t); });
  const auto [fe, fo] = even_odd_split(f);
  for (int n = 0; n <= 5; ++n)
    for (int s : {1, -1}) {
      const double z = s * std::pow(0.5, n);
      CHECK(std::abs(fe(s, n) - z * z) < 1e-15);
      CHECK(std::abs(fo(s, n) - z) < 1e-15);
    }
  const auto g = LineFunction::sample(p, 0, 5, [](double t) { return cplx(std::cos(t)); });
  CHECK(std::abs(even_odd_split(g).second(1, 2)) == 0.0);
  // e = cos - i sin(-.) splits into the q-cosine and i times the q-sine
  const auto e = LineFunction::sample(p, -2, 8, [&](double t) { return qexp(cplx(0.0, t), p); });
  const auto [ee, eo] = even_odd_split(e);
  for (int n = -2; n <= 8; ++n) {
    const double z = std::pow(0.5, n);
    CHECK(std::abs(ee(1, n) - qcos(z, p)) < 1e-12);
    CHECK(std::abs(eo(1, n) - cplx(0.0, 1.0) * qsin(z, p)) < 1e-12);
  }
}

TEST_CASE("partial derivatives") {
  const QParams p(0.5, 0.5);
  const LatticeWindow w(-3, 6, -3, 6);
  const GridFunction f = random_even_function(p, w, w, 11);
  const GridFunction d0 = dq_mixed(f, 0, 0);
  CHECK(max_abs_interior(d0, f) == 0.0);
  const GridFunction a = dq_mixed(f, 1, 1);
  const GridFunction b = dq_partial(dq_partial(f, 1), 2);
  CHECK(max_abs_interior(a, b) <= 1e-12 * a.max_abs());
  CHECK(dq_partial(f, 2).parity() == Parity::odd);
  CHECK(dq_partial(f, 1).window().taint1 == 1);
  CHECK_THROWS_AS(dq_partial(f, 3), InvalidParams);
}

TEST_CASE("derivatives of the kernel stay below the product bound") {
  const QParams p(0.5, 0.0);
  const LatticeWindow w(-4, 8, -4, 8);
  const double bound = 4.0 / (oracle::qq_inf_half * oracle::qq_inf_half);
  for (int k1 : {-2, 0, 3})
    for (int k2 : {-1, 2}) {
      const GridFunction L = kernel_grid(p, w, 1, k1, k2);
      for (auto [b1, b2] : {std::pair{1, 0}, {0, 1}, {1, 1}, {2, 0}}) {
        const GridFunction d = dq_mixed(L, b1, b2);
        const double lim = bound * std::pow(std::pow(0.5, k1), b1) * std::pow(std::pow(0.5, k2), b2);
        d.for_each([&](int s, int a, int b) {
          if (d.window().untainted(a, b)) CHECK(std::abs(d.at(s, a, b)) <= lim * (1.0 + 1e-12));
        });
      }
    }
}

TEST_CASE("Bessel operator") {
  const QParams p(0.5, 0.5);
  const LatticeWindow w(-3, 6, -3, 6);
  GridFunction one(p, w);
  for (auto& v : one.data()) v = 1.0;
  const GridFunction b1 = bessel_op(one);
  b1.for_each([&](int s, int a, int b) {
    if (b1.window().untainted(a, b)) CHECK(std::abs(b1.at(s, a, b)) < 1e-10);
  });

  const GridFunction f = random_even_function(p, w, w, 3);
  const GridFunction conj = bessel_op(f), exp = bessel_op_expanded(f);
  CHECK(max_abs_interior(conj, exp) <= 1e-11 * conj.max_abs());
  // the coefficient written as -q[-2a-1]_q only matches for alpha in {-1/2, 0}
  const GridFunction printed = bessel_op_expanded_printed(f);
  CHECK(max_abs_interior(conj, printed) > 1e-3 * conj.max_abs());
  for (double a : {-0.5, 0.0}) {
    const QParams pa(0.5, a);
    const GridFunction g = random_even_function(pa, w, w, 4);
    CHECK(max_abs_interior(bessel_op(g), bessel_op_expanded_printed(g)) <= 1e-11 * bessel_op(g).max_abs());
  }
}

TEST_CASE("kernel eigenfunctions") {
  for (const QParams p : {QParams(0.5, 0.0), QParams(0.5, 0.5)}) {
    const LatticeWindow w(-4, 10, -4, 10);
    for (int k1 : {-1, 1})
      for (int k2 : {0, 2}) {
        const GridFunction L = kernel_grid(p, w, -1, k1, k2);
        const double l2 = std::pow(0.5, 2 * k1) + std::pow(0.5, 2 * k2);
        const GridFunction B = bessel_op(L);
        const GridFunction D = weinstein_op(L, 1);
        // relative to the size of the right-hand side on the window
        const double scale = l2 * L.max_abs();
        D.for_each([&](int s, int a, int b) {
          if (!D.window().untainted(a, b)) return;
          const cplx v = L.at(s, a, b);
          CHECK(std::abs(D.at(s, a, b) + l2 * v) <= 1e-9 * scale);
          CHECK(std::abs(B.at(s, a, b) + std::pow(0.5, 2 * k2) * v) <= 1e-9 * scale);
        });
      }
  }
}

TEST_CASE("Delta is self-adjoint on compact support") {
  const QParams p(0.5, 0.5);
  const LatticeWindow w(-6, 10, -6, 10), s(-2, 5, -2, 5);
  const GridFunction f = random_even_function(p, w, s, 5), g = random_even_function(p, w, s, 6);
  const cplx lhs = integrate_product(weinstein_op(f, 1), g), rhs = integrate_product(f, weinstein_op(g, 1));
  CHECK(std::abs(lhs - rhs) <= 1e-9 * std::abs(lhs));
  CHECK(lp_norm(weinstein_op(f, 0) - f, 2) == 0.0);
}
