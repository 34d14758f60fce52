// SPDX-License-Identifier: Apache-2.0
// Seeded test functions on the lattice.
#pragma once

#include <cstdint>

#include "qw/qops.hpp"

namespace qw {

/// Independent uniform complex samples in [-1,1]^2 on every point of
/// `support` (both signs of x1), zero elsewhere in `window`.  Even in x2.
GridFunction random_even_function(const QParams& p, const LatticeWindow& window, const LatticeWindow& support,
                                  std::uint64_t seed);

/// Positive real bump: values in [1/2, 1] on the exponent box, tapered by
/// one half on its boundary layers.
GridFunction random_bump(const QParams& p, const LatticeWindow& window, const LatticeWindow& support, std::uint64_t seed);

/// Indicator of the lattice point (s1 q^n1, q^n2).
GridFunction point_mass(const QParams& p, const LatticeWindow& window, int s1, int n1, int n2, cplx value = 1.0);

}  // namespace qw
