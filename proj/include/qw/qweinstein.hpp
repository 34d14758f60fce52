// SPDX-License-Identifier: Apache-2.0
// The q-Weinstein transform on R_q x R_{q,+}.
//
// Domain convention: the first variable is SIGNED (x1 in R_q) and the
// second is positive (x2 in R_{q,+}); the measure is
// x2^{2a+1} d_qx1 d_qx2 with the x1 sum running over both signs.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qw/kernel_table.hpp"
#include "qw/qintegrate.hpp"
#include "qw/qops.hpp"
#include "qw/qspecial.hpp"

namespace qw {

/// Lambda^a_{q,lambda}(x) = e(-i l1 x1; q^2) j_a(l2 x2; q^2).
/// Real lattice products go through the kernel table; anything else
/// through the double series.
cplx kernel_eval(cplx lambda1, cplx lambda2, const LatticePoint& x1, const LatticePoint& x2, const QParams& p,
                 const TruncationPolicy& pol = {});
/// Both arguments on the lattice.
cplx kernel_lattice(const LatticePoint& l1, const LatticePoint& l2, const LatticePoint& x1, const LatticePoint& x2,
                    const QParams& p);

/// K_{a,q} = (1+q)^{1/2-a} / (2 Gamma_{q^2}(1/2) Gamma_{q^2}(a+1))
double normalization_K(const QParams& p);

/// 4 / (q;q)_inf^2, the uniform bound of the kernel on real arguments.
double kernel_bound(const QParams& p);

struct TransformResult {
  GridFunction grid;
  double tail_bound = 0.0;  // estimated relative L2 mass outside the window (squared-norm ratio)
  TruncationPolicy policy_used;
  bool converged = true;
  std::string diagnostic;
};

/// F(l) = K sum_x w(x) f(x) Lambda_l(x) on every point of lambda_window.
TransformResult forward(const GridFunction& f, const LatticeWindow& lambda_window, const TruncationPolicy& pol = {});
/// f(x) = K sum_l w(l) F(l) Lambda_l(-x): forward with the first kernel argument sign-flipped.
TransformResult inverse(const GridFunction& F, const LatticeWindow& x_window, const TruncationPolicy& pol = {});

/// Relative L2 tail of a transform outside its window: geometric
/// continuation of the near-origin layers plus the outermost far layers.
double spectral_tail(const GridFunction& F);

struct WindowChoice {
  LatticeWindow window;
  double tail = 0.0;
  int rounds = 0;
};

/// Exponent box [n1_lo, n1_hi] x [n2_lo, n2_hi] of the nonzero samples.
std::optional<std::array<int, 4>> support_box(const GridFunction& f, double zero_tol = 0.0);

/// Grows the lambda window until spectral_tail < target.  Throws
/// DivergenceError when the far layers stop decaying (kernel unbounded on
/// the lattice) or the window exceeds max_span exponents.
WindowChoice choose_lambda_window(const GridFunction& f, double target, int max_span = 1200);

/// forward() on an automatically chosen window.
TransformResult forward_auto(const GridFunction& f, double target = 1e-13, int max_span = 1200);

struct IdentityReport {
  // (a) and (b) are indexed [n][p] for n, p in 0..2.
  std::array<std::array<double, 3>, 3> a{};
  std::array<std::array<double, 3>, 3> b{};
  double c = 0.0;
  double d = 0.0;
  double max() const;
};

/// Both sides of the transform/operator identities, as relative L2
/// discrepancies over the lambda window (d: relative to the Cauchy-Schwarz scale).
/// `lambda_window` must be large enough for (b)'s operators to keep an untainted core.
IdentityReport identity_suite(const GridFunction& f, const GridFunction& g, const LatticeWindow& lambda_window,
                              int max_order = 2);

struct OrthogonalityResult {
  cplx sum{0.0, 0.0};
  double predicted = 0.0;  // closed-form Dirac weight (0 off the diagonal)
  double scale = 0.0;      // diagonal value used for the off-diagonal comparison
  int shells = 0;
  double last_shell = 0.0; // magnitude of the last shell added
};

/// Shell-by-shell truncated sum of Lambda_l(x) Lambda_{-l}(y) over the lambda lattice.
OrthogonalityResult orthogonality_check(const LatticePoint& x1, const LatticePoint& x2, const LatticePoint& y1,
                                        const LatticePoint& y2, const QParams& p, int max_shells = 400,
                                        double tol = 1e-16);

}  // namespace qw
