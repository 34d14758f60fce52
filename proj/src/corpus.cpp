// SPDX-License-Identifier: Apache-2.0
#include "qw/corpus.hpp"

#include <random>

namespace qw {

namespace {
void check_inside(const LatticeWindow& window, const LatticeWindow& support) {
  if (!window.contains(support.n1_min, support.n2_min) || !window.contains(support.n1_max, support.n2_max))
    throw InvalidParams("support box must lie inside the window");
}
}  // namespace

GridFunction random_even_function(const QParams& p, const LatticeWindow& window, const LatticeWindow& support,
                                  std::uint64_t seed) {
  check_inside(window, support);
  GridFunction f(p, window, Parity::even);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int s : {1, -1})
    for (int a = support.n1_min; a <= support.n1_max; ++a)
      for (int b = support.n2_min; b <= support.n2_max; ++b) {
        const double re = u(rng);
        const double im = u(rng);
        f.at(s, a, b) = cplx(re, im);
      }
  return f;
}

GridFunction random_bump(const QParams& p, const LatticeWindow& window, const LatticeWindow& support, std::uint64_t seed) {
  check_inside(window, support);
  GridFunction f(p, window, Parity::even);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int s : {1, -1})
    for (int a = support.n1_min; a <= support.n1_max; ++a)
      for (int b = support.n2_min; b <= support.n2_max; ++b) {
        const bool edge = a == support.n1_min || a == support.n1_max || b == support.n2_min || b == support.n2_max;
        f.at(s, a, b) = u(rng) * (edge ? 0.5 : 1.0);
      }
  return f;
}

GridFunction point_mass(const QParams& p, const LatticeWindow& window, int s1, int n1, int n2, cplx value) {
  GridFunction f(p, window, Parity::even);
  if (!window.contains(n1, n2)) throw InvalidParams("point_mass: point outside the window");
  f.at(s1, n1, n2) = value;
  return f;
}

}  // namespace qw
