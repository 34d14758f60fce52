// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "qw/corpus.hpp"
#include "qw/qintegrate.hpp"

using namespace qw;

TEST_CASE("Jackson integral on [0,a]") {
  const QParams p(0.5, 0.0);
  const auto one = jackson_0_to_a([](double) { return cplx(1.0); }, 0.25, p);
  CHECK(one.value.real() == doctest::Approx(0.25).epsilon(1e-15));
  const auto x = jackson_0_to_a([](double t) { return cplx(t); }, 1.0, p);
  CHECK(x.value.real() == doctest::Approx(1.0 / 1.5).epsilon(1e-15));
  CHECK(x.converged);
  auto f = [](double t) { return cplx(std::sin(3.0 * t), t * t); };
  const auto a = jackson_0_to_a(f, 2.0, p);
  const auto b = jackson_0_to_a([&](double t) { return 2.0 * f(t); }, 2.0, p);
  CHECK(b.value == 2.0 * a.value);
  CHECK_THROWS_AS(jackson_0_to_a(f, -1.0, p), InvalidParams);
}

TEST_CASE("Jackson integral on the signed line") {
  const QParams p(0.5, 0.0);
  const auto odd = jackson_signed_line([](double t) { return cplx(t * std::exp(-t * t)); }, p);
  CHECK(odd.value == cplx(0.0, 0.0));
  const int m = 3;
  const auto ind = jackson_signed_line([&](double t) { return cplx(t == std::pow(0.5, m) ? 1.0 : 0.0); }, p);
  CHECK(ind.value.real() == doctest::Approx(0.5 * std::pow(0.5, m)).epsilon(1e-15));

  auto g = [](double t) { return cplx(std::exp(-t * t) * (1.0 + t), 0.0); };
  const auto full = jackson_signed_line(g, p);
  const auto half = jackson_0_to_inf([&](double t) { return 0.5 * (g(t) + g(-t)); }, p);
  CHECK(std::abs(full.value - 2.0 * half.value) <= 1e-13 * std::abs(full.value));
}

TEST_CASE("norms on the weighted lattice") {
  for (const QParams p : {QParams(0.5, 0.0), QParams(0.7, 0.5)}) {
    const LatticeWindow w(-4, 8, -4, 8);
    GridFunction zero(p, w);
    CHECK(lp_norm(zero, 2) == 0.0);
    CHECK(integrate_mu(zero).value == cplx(0.0, 0.0));

    const int n1 = 2, n2 = -1;
    const GridFunction e = point_mass(p, w, -1, n1, n2);
    const double expect = (1 - p.q) * (1 - p.q) * std::pow(p.q, n1) * std::pow(p.q, (2 * p.alpha + 2) * n2);
    CHECK(lp_norm(e, 2) * lp_norm(e, 2) == doctest::Approx(expect).epsilon(1e-14));

    const GridFunction f = random_even_function(p, w, LatticeWindow(-2, 6, -2, 6), 7);
    const cplx c(-1.5, 2.0);
    for (double pp : {1.0, 2.0, 3.0})
      CHECK(lp_norm(c * f, pp) == doctest::Approx(std::abs(c) * lp_norm(f, pp)).epsilon(1e-14));
    CHECK(integrate_mu(f).converged);
  }
}

TEST_CASE("tail estimate flags truncated mass") {
  const QParams p(0.5, 0.0);
  const LatticeWindow w(-4, 8, -4, 8);
  GridFunction f(p, w);
  for (auto& v : f.data()) v = 1.0;
  // constant data up to the near edge leaves a visible geometric tail
  const auto r = integrate_mu(f, 1e-8);
  CHECK(r.tail > 0.0);
  CHECK_FALSE(r.converged);
}

TEST_CASE("compensated ascending summation") {
  std::vector<double> t{1e16, 1.0, -1e16, 1.0};
  CHECK(sum_ascending(t) == 2.0);
  Neumaier n;
  for (int i = 0; i < 10; ++i) n.add(0.1);
  CHECK(n.value() == doctest::Approx(1.0).epsilon(1e-16));
}
