// SPDX-License-Identifier: Apache-2.0
// Operator calculus on lattice functions.
//
// Points of the domain are (x1, x2) with x1 = s q^n1 (s = +-1) and
// x2 = q^n2 > 0.  The first variable ranges over the signed lattice; the
// second over the positive half, with values at -x2 fixed by the parity
// flag.  Larger exponents mean points closer to the origin.
#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qw/qcore.hpp"

namespace qw {

struct TaintError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Parity { even, odd };

inline Parity flip(Parity p) { return p == Parity::even ? Parity::odd : Parity::even; }
inline double parity_sign(Parity p) { return p == Parity::even ? 1.0 : -1.0; }

struct LatticeWindow {
  int n1_min = 0, n1_max = 0;
  int n2_min = 0, n2_max = 0;
  // Boundary layers (at both ends of each exponent range) whose values
  // depend on data outside the window.
  int taint1 = 0, taint2 = 0;

  LatticeWindow() = default;
  LatticeWindow(int a, int b, int c, int d) : n1_min(a), n1_max(b), n2_min(c), n2_max(d) { validate(); }

  void validate() const;
  int size1() const { return n1_max - n1_min + 1; }
  int size2() const { return n2_max - n2_min + 1; }
  std::size_t points() const { return 2u * static_cast<std::size_t>(size1()) * static_cast<std::size_t>(size2()); }
  int taint_depth() const { return taint1 > taint2 ? taint1 : taint2; }
  bool contains(int n1, int n2) const { return n1 >= n1_min && n1 <= n1_max && n2 >= n2_min && n2 <= n2_max; }
  bool untainted(int n1, int n2) const {
    return n1 >= n1_min + taint1 && n1 <= n1_max - taint1 && n2 >= n2_min + taint2 && n2 <= n2_max - taint2;
  }
  bool fully_tainted() const { return 2 * taint1 >= size1() || 2 * taint2 >= size2(); }
  /// Same ranges, taint reset.
  LatticeWindow clean() const { return LatticeWindow(n1_min, n1_max, n2_min, n2_max); }
  LatticeWindow grown(int layers) const {
    return LatticeWindow(n1_min - layers, n1_max + layers, n2_min - layers, n2_max + layers);
  }
  friend bool operator==(const LatticeWindow&, const LatticeWindow&) = default;
};

class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(const QParams& p, const LatticeWindow& w, Parity par = Parity::even);

  const QParams& params() const { return params_; }
  const LatticeWindow& window() const { return window_; }
  LatticeWindow& window() { return window_; }
  Parity parity() const { return parity_; }
  void set_parity(Parity p) { parity_ = p; }

  std::size_t index(int s1, int n1, int n2) const {
    const std::size_t sb = s1 > 0 ? 0u : 1u;
    return (sb * static_cast<std::size_t>(window_.size1()) + static_cast<std::size_t>(n1 - window_.n1_min)) *
               static_cast<std::size_t>(window_.size2()) +
           static_cast<std::size_t>(n2 - window_.n2_min);
  }
  cplx& at(int s1, int n1, int n2) { return data_[index(s1, n1, n2)]; }
  const cplx& at(int s1, int n1, int n2) const { return data_[index(s1, n1, n2)]; }

  /// f(s1 q^n1, s2 q^n2); zero outside the stored window.
  cplx value(int s1, int n1, int s2, int n2) const {
    if (!window_.contains(n1, n2)) return 0.0;
    const cplx v = at(s1, n1, n2);
    return s2 > 0 ? v : parity_sign(parity_) * v;
  }

  std::vector<cplx>& data() { return data_; }
  const std::vector<cplx>& data() const { return data_; }

  /// Calls fn(s1, n1, n2) for every stored point.
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (int s : {1, -1})
      for (int a = window_.n1_min; a <= window_.n1_max; ++a)
        for (int b = window_.n2_min; b <= window_.n2_max; ++b) fn(s, a, b);
  }

  bool all_finite() const;
  double max_abs() const;
  /// Copy onto another window (zero fill, values outside the new window dropped).
  GridFunction resized(const LatticeWindow& w) const;
  /// Largest |value| among points within `layers` of the window boundary.
  double edge_max(int layers) const;

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(cplx c);

 private:
  QParams params_;
  LatticeWindow window_;
  Parity parity_ = Parity::even;
  std::vector<cplx> data_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(cplx c, GridFunction a);

/// Function on the signed 1-D lattice {+-q^n : n_min <= n <= n_max}.
struct LineFunction {
  QParams params;
  int n_min = 0, n_max = 0;
  std::vector<cplx> pos, neg;  // values at +q^n and -q^n

  LineFunction() = default;
  LineFunction(const QParams& p, int a, int b);
  static LineFunction sample(const QParams& p, int a, int b, const std::function<cplx(double)>& f);
  cplx operator()(int sign, int n) const;
  cplx& ref(int sign, int n) { return sign > 0 ? pos[static_cast<std::size_t>(n - n_min)] : neg[static_cast<std::size_t>(n - n_min)]; }
};

/// Rubin's q^2-derivative at z = sign q^n:
/// [f(z/q) + f(-z/q) - f(qz) + f(-qz) - 2 f(-z)] / (2 (1-q) z).
/// Throws TaintError if a neighbour lies outside the stored range.
cplx dq_1d(const LineFunction& f, const LatticePoint& at);
/// Same derivative via the split form (f_e(z/q)-f_e(z))/((1-q)z) + (f_o(z)-f_o(qz))/((1-q)z).
cplx dq_1d_split(const LineFunction& f, const LatticePoint& at);
/// Derivative at every point whose neighbours are stored; range shrinks by one at each end.
LineFunction dq_line(const LineFunction& f);

std::pair<LineFunction, LineFunction> even_odd_split(const LineFunction& f);

/// Partial q-derivative along x1 (var = 1) or x2 (var = 2).  Taint grows by
/// one layer in that variable; a derivative in x2 flips the parity flag.
GridFunction dq_partial(const GridFunction& f, int var);
/// D^beta = d_1^{beta1} d_2^{beta2}
GridFunction dq_mixed(const GridFunction& f, int beta1, int beta2);

/// q-Bessel operator in x2, conjugated form |y|^{-(2a+1)} d(|y|^{2a+1} d f).
GridFunction bessel_op(const GridFunction& f);
/// Expanded form q^{2a+1} d^2 f + ([2a+1]_q / y) d f.
GridFunction bessel_op_expanded(const GridFunction& f);
/// The expansion with the coefficient written as -q[-2a-1]_q; equals the
/// conjugated form only for alpha in {-1/2, 0}.
GridFunction bessel_op_expanded_printed(const GridFunction& f);

/// Delta^n with Delta = d_1^2 + B.
GridFunction weinstein_op(const GridFunction& f, int n);

/// Multiply pointwise by g(x1, x2) (g evaluated at positive x2 only).
GridFunction multiply_by(const GridFunction& f, const std::function<cplx(double, double)>& g);

}  // namespace qw
