// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "qw/corpus.hpp"
#include "qw/qweinstein.hpp"

using namespace qw;

TEST_CASE("kernel values") {
  const QParams p(0.5, 0.5);
  CHECK(std::abs(kernel_eval(0.0, 0.0, {1, 3}, {1, -2}, p) - 1.0) == 0.0);
  CHECK(std::abs(kernel_eval(cplx(0.0, 0.0), cplx(0.0, 0.0), {-1, 0}, {1, 0}, p) - 1.0) == 0.0);
  // lattice and generic evaluation agree
  for (int k : {-6, -1, 0, 4}) {
    const cplx a = kernel_lattice({-1, k}, {1, k + 1}, {1, 2}, {1, -1}, p);
    const cplx b = kernel_eval(-std::pow(0.5, k), std::pow(0.5, k + 1), {1, 2}, {1, -1}, p);
    CHECK(std::abs(a - b) <= 1e-13 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("kernel bounds") {
  for (const QParams p : {QParams(0.5, 0.0), QParams(0.5, 0.5)}) {
    const double bound = 4.0 / (oracle::qq_inf_half * oracle::qq_inf_half);
    CHECK(kernel_bound(p) == doctest::Approx(bound).epsilon(1e-14));
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> ex(-40, 20), sg(0, 1);
    for (int i = 0; i < 200; ++i) {
      const LatticePoint l1{sg(rng) ? 1 : -1, ex(rng)}, l2{1, ex(rng)}, x1{sg(rng) ? 1 : -1, ex(rng)}, x2{1, ex(rng)};
      CHECK(std::abs(kernel_lattice(l1, l2, x1, x2, p)) <= bound);
    }
    // growth for complex arguments: |Lambda_z(x)| <= 4 exp(2a(1+sqrt q)|z|) on [-a,a]^2
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
      const cplx z1(u(rng), u(rng)), z2(u(rng), u(rng));
      const LatticePoint x1{sg(rng) ? 1 : -1, ex(rng) % 4 + 4}, x2{1, ex(rng) % 4 + 4};
      const double a = std::max(x1.value(p.q) * x1.sign, x2.value(p.q));
      const double nz = std::sqrt(std::norm(z1) + std::norm(z2));
      CHECK(std::abs(kernel_eval(z1, z2, x1, x2, p)) <= 4.0 * std::exp(2.0 * a * (1.0 + std::sqrt(p.q)) * nz));
    }
  }
}

TEST_CASE("normalization constant") {
  const QParams h(0.5, -0.5);
  const double g = qgamma_base(0.5, 0.25);
  CHECK(normalization_K(h) == doctest::Approx(1.5 / (2.0 * g * g)).epsilon(1e-14));
  CHECK(normalization_K(QParams(0.5, 0.5)) == doctest::Approx(oracle::K_half_half).epsilon(1e-13));
  const double ref = static_cast<double>(oracle::K(oracle::big("0.7"), oracle::big("1.25")));
  CHECK(normalization_K(QParams(0.7, 1.25)) == doctest::Approx(ref).epsilon(1e-13));
  for (double q : {0.1, 0.5, 0.9})
    for (double a : {-0.5, 0.0, 2.0}) CHECK(normalization_K(QParams(q, a)) > 0.0);
}

TEST_CASE("forward transform of simple functions") {
  const QParams p(0.5, 0.5);
  const LatticeWindow xw(-4, 8, -4, 8), lw(-10, 12, -10, 12);
  const auto z = forward(GridFunction(p, xw), lw);
  CHECK(z.grid.max_abs() == 0.0);

  const int s1 = -1, n1 = 1, n2 = 2;
  const GridFunction e = point_mass(p, xw, s1, n1, n2);
  const auto F = forward(e, lw);
  const double K = normalization_K(p);
  const double w = 0.25 * std::pow(0.5, n1) * std::pow(0.5, 3.0 * n2);
  F.grid.for_each([&](int s, int a, int c) {
    const cplx ref = K * w * kernel_lattice({s, a}, {1, c}, {s1, n1}, {1, n2}, p);
    CHECK(std::abs(F.grid.at(s, a, c) - ref) <= 1e-15 * std::max(std::abs(ref), K * w));
  });

  const GridFunction f = random_even_function(p, xw, LatticeWindow(-2, 5, -2, 5), 21);
  const double lhs = forward(f, lw).grid.max_abs();
  CHECK(lhs <= kernel_bound(p) * K * lp_norm(f, 1.0));
}

TEST_CASE("inverse transform") {
  const QParams p(0.5, 0.0);
  const LatticeWindow xw(-4, 8, -4, 8);
  CHECK(inverse(GridFunction(p, xw), xw).grid.max_abs() == 0.0);

  const GridFunction f = random_even_function(p, xw, xw, 2);
  const auto F = forward_auto(f);
  CHECK(F.converged);
  const auto g = inverse(F.grid, xw);
  CHECK(lp_norm(g.grid - f, 2) <= 1e-6 * lp_norm(f, 2));
  CHECK(lp_norm(F.grid, 2) == doctest::Approx(lp_norm(f, 2)).epsilon(1e-6));

  // inverse(F)(x) = forward(F)(-x)
  const LatticeWindow small(-3, 3, -3, 3);
  const GridFunction h = random_even_function(p, small, small, 8);
  const auto inv = inverse(h, small), fwd = forward(h, small);
  inv.grid.for_each([&](int s, int a, int b) {
    CHECK(std::abs(inv.grid.at(s, a, b) - fwd.grid.at(-s, a, b)) <= 1e-14 * fwd.grid.max_abs());
  });
}

TEST_CASE("window choice fails fast off the admissible lattice") {
  const QParams p(0.7, 0.5);
  const LatticeWindow xw(-4, 8, -4, 8);
  const GridFunction f = random_even_function(p, xw, xw, 1);
  CHECK_THROWS_AS(choose_lambda_window(f, 1e-13), DivergenceError);
}

TEST_CASE("transform identities") {
  const QParams p(0.5, 0.5);
  const LatticeWindow xw(-4, 8, -4, 8), s(-2, 5, -2, 5);
  const GridFunction zero(p, xw);
  const auto wc0 = choose_lambda_window(random_even_function(p, xw, s, 1), 1e-13);
  CHECK(identity_suite(zero, zero, wc0.window).max() == 0.0);

  const GridFunction f = random_even_function(p, xw, s, 31), g = random_even_function(p, xw, s, 32);
  const auto wc = choose_lambda_window(f, 1e-13);
  const IdentityReport r = identity_suite(f, g, wc.window, 1);
  CHECK(r.c <= 1e-7);
  CHECK(r.d <= 1e-8);
  for (int n = 0; n <= 1; ++n)
    for (int k = 0; k <= 1; ++k) {
      CHECK(r.a[n][k] <= 1e-7);
      CHECK(r.b[n][k] <= 1e-7);
    }
}

TEST_CASE("orthogonality of the kernel") {
  const QParams p(0.5, 0.0);
  const LatticePoint x1{1, 1}, x2{1, 2}, y1{-1, 0}, y2{1, 3};
  const auto diag = orthogonality_check(x1, x2, x1, x2, p);
  CHECK(std::abs(diag.sum / diag.predicted - 1.0) <= 1e-3);
  const auto off = orthogonality_check(x1, x2, y1, y2, p);
  CHECK(off.predicted == 0.0);
  CHECK(std::abs(off.sum) <= 1e-3 * off.scale);
  // the Dirac weight is the reciprocal squared norm of the indicator
  const GridFunction e = point_mass(p, LatticeWindow(-4, 8, -4, 8), x1.sign, x1.exponent, x2.exponent);
  const double K = normalization_K(p);
  CHECK(diag.predicted * K * K * std::pow(lp_norm(e, 2), 2) == doctest::Approx(1.0).epsilon(1e-13));
}
