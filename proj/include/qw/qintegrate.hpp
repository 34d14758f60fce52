// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "qw/qops.hpp"

namespace qw {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Neumaier compensated accumulator.
class Neumaier {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class NeumaierC {
 public:
  void add(cplx z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  Neumaier re_, im_;
};

/// Sums terms in ascending order of magnitude with compensation.
cplx sum_ascending(std::vector<cplx> terms);
double sum_ascending(std::vector<double> terms);

enum class MeasureKind { plain_line, signed_line, weighted_2d };

struct Measure {
  QParams params;
  MeasureKind kind = MeasureKind::weighted_2d;

  /// Jackson weight of the point q^n on the half line: (1-q) q^n.
  double line_weight(int n) const;
  /// Weight of (s q^n1, q^n2) under x2^{2a+1} d_qx1 d_qx2: (1-q)^2 q^{n1 + (2a+2) n2}.
  double weight(int n1, int n2) const;
  double log_weight(int n1, int n2) const;
};

struct IntegralResult {
  cplx value{0.0, 0.0};
  double tail = 0.0;      // estimate of the omitted part (absolute)
  bool converged = true;  // tail within tolerance relative to |value|
};

/// (1-q) a sum_{n>=0} q^n f(a q^n), n = 0..policy.n_max - policy.n_min.
IntegralResult jackson_0_to_a(const std::function<cplx(double)>& f, double a, const QParams& p,
                              const TruncationPolicy& pol = {});
/// (1-q) sum_n q^n [f(q^n) + f(-q^n)] over n in [n_min, n_max].
IntegralResult jackson_signed_line(const std::function<cplx(double)>& f, const QParams& p,
                                   const TruncationPolicy& pol = {});
IntegralResult jackson_signed_line(const LineFunction& f);
/// (1-q) sum_n q^n f(q^n) over n in [n_min, n_max] (0 to infinity).
IntegralResult jackson_0_to_inf(const std::function<cplx(double)>& f, const QParams& p,
                                const TruncationPolicy& pol = {});

/// Double Jackson sum of f against mu_{alpha,q}.  The tail estimate
/// extrapolates the edge layers of the window geometrically.
IntegralResult integrate_mu(const GridFunction& f, double tail_tol = 1e-8);
/// p-th root of the integral of |f|^p; p = infinity gives the max over stored samples.
double lp_norm(const GridFunction& f, double p);
/// Integral of f * g (no conjugation).
cplx integrate_product(const GridFunction& f, const GridFunction& g);
/// Integral of |f|^2 restricted to the untainted part of the window.
double l2_norm_sq_untainted(const GridFunction& f);

}  // namespace qw
