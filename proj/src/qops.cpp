// SPDX-License-Identifier: Apache-2.0
#include "qw/qops.hpp"

#include <algorithm>
#include <cmath>

namespace qw {

void LatticeWindow::validate() const {
  if (n1_min > n1_max || n2_min > n2_max) throw InvalidParams("empty lattice window");
  if (taint1 < 0 || taint2 < 0) throw InvalidParams("negative taint");
}

GridFunction::GridFunction(const QParams& p, const LatticeWindow& w, Parity par)
    : params_(p), window_(w), parity_(par), data_(w.points(), cplx(0.0, 0.0)) {
  p.validate();
  w.validate();
}

bool GridFunction::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](const cplx& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

GridFunction GridFunction::resized(const LatticeWindow& w) const {
  GridFunction g(params_, w, parity_);
  g.for_each([&](int s, int a, int b) {
    if (window_.contains(a, b)) g.at(s, a, b) = at(s, a, b);
  });
  return g;
}

double GridFunction::edge_max(int layers) const {
  double m = 0.0;
  for_each([&](int s, int a, int b) {
    const bool edge = a < window_.n1_min + layers || a > window_.n1_max - layers ||
                      b < window_.n2_min + layers || b > window_.n2_max - layers;
    if (edge) m = std::max(m, std::abs(at(s, a, b)));
  });
  return m;
}

namespace {
void require_compatible(const GridFunction& a, const GridFunction& b) {
  if (!(a.window().clean() == b.window().clean()) || a.parity() != b.parity())
    throw InvalidParams("grid functions live on different windows or parities");
}
}  // namespace

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  window_.taint1 = std::max(window_.taint1, o.window_.taint1);
  window_.taint2 = std::max(window_.taint2, o.window_.taint2);
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_compatible(*this, o);
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  window_.taint1 = std::max(window_.taint1, o.window_.taint1);
  window_.taint2 = std::max(window_.taint2, o.window_.taint2);
  return *this;
}

GridFunction& GridFunction::operator*=(cplx c) {
  for (auto& v : data_) v *= c;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(cplx c, GridFunction a) { return a *= c; }

LineFunction::LineFunction(const QParams& p, int a, int b)
    : params(p), n_min(a), n_max(b), pos(static_cast<std::size_t>(b - a + 1)), neg(static_cast<std::size_t>(b - a + 1)) {
  if (a > b) throw InvalidParams("empty line window");
}

LineFunction LineFunction::sample(const QParams& p, int a, int b, const std::function<cplx(double)>& f) {
  LineFunction g(p, a, b);
  for (int n = a; n <= b; ++n) {
    const double x = std::pow(p.q, n);
    g.ref(1, n) = f(x);
    g.ref(-1, n) = f(-x);
  }
  return g;
}

cplx LineFunction::operator()(int sign, int n) const {
  if (n < n_min || n > n_max) return 0.0;
  const auto i = static_cast<std::size_t>(n - n_min);
  return sign > 0 ? pos[i] : neg[i];
}

cplx dq_1d(const LineFunction& f, const LatticePoint& at) {
  const int s = at.sign, n = at.exponent;
  if (n - 1 < f.n_min || n + 1 > f.n_max) throw TaintError("dq_1d: neighbours of the point are outside the stored range");
  const double q = f.params.q;
  const double z = s * std::pow(q, n);
  const cplx num = f(s, n - 1) + f(-s, n - 1) - f(s, n + 1) + f(-s, n + 1) - 2.0 * f(-s, n);
  return num / (2.0 * (1.0 - q) * z);
}

cplx dq_1d_split(const LineFunction& f, const LatticePoint& at) {
  const int s = at.sign, n = at.exponent;
  if (n - 1 < f.n_min || n + 1 > f.n_max) throw TaintError("dq_1d_split: neighbours outside the stored range");
  const double q = f.params.q;
  const double z = s * std::pow(q, n);
  auto fe = [&](int sg, int k) { return 0.5 * (f(sg, k) + f(-sg, k)); };
  auto fo = [&](int sg, int k) { return 0.5 * (f(sg, k) - f(-sg, k)); };
  return (fe(s, n - 1) - fe(s, n)) / ((1.0 - q) * z) + (fo(s, n) - fo(s, n + 1)) / ((1.0 - q) * z);
}

LineFunction dq_line(const LineFunction& f) {
  if (f.n_max - f.n_min < 2) throw TaintError("dq_line: range too short");
  LineFunction g(f.params, f.n_min + 1, f.n_max - 1);
  for (int n = g.n_min; n <= g.n_max; ++n)
    for (int s : {1, -1}) g.ref(s, n) = dq_1d(f, LatticePoint{s, n});
  return g;
}

std::pair<LineFunction, LineFunction> even_odd_split(const LineFunction& f) {
  LineFunction e(f.params, f.n_min, f.n_max), o(f.params, f.n_min, f.n_max);
  for (int n = f.n_min; n <= f.n_max; ++n) {
    const cplx a = f(1, n), b = f(-1, n);
    e.ref(1, n) = e.ref(-1, n) = 0.5 * (a + b);
    o.ref(1, n) = 0.5 * (a - b);
    o.ref(-1, n) = -o.ref(1, n);
  }
  return {e, o};
}

GridFunction dq_partial(const GridFunction& f, int var) {
  if (var != 1 && var != 2) throw InvalidParams("dq_partial: var must be 1 or 2");
  const double q = f.params().q;
  LatticeWindow w = f.window();
  GridFunction g(f.params(), w.clean(), var == 2 ? flip(f.parity()) : f.parity());
  if (var == 1) {
    g.window().taint1 = w.taint1 + 1;
    g.window().taint2 = w.taint2;
  } else {
    g.window().taint1 = w.taint1;
    g.window().taint2 = w.taint2 + 1;
  }
  if (g.window().fully_tainted()) throw TaintError("dq_partial: output window fully tainted");

  std::vector<double> inv(static_cast<std::size_t>(var == 1 ? w.size1() : w.size2()));
  const int base = var == 1 ? w.n1_min : w.n2_min;
  for (std::size_t i = 0; i < inv.size(); ++i) inv[i] = 1.0 / (2.0 * (1.0 - q) * std::pow(q, base + static_cast<int>(i)));

  if (var == 1) {
    g.for_each([&](int s, int a, int b) {
      const cplx num = f.value(s, a - 1, 1, b) + f.value(-s, a - 1, 1, b) - f.value(s, a + 1, 1, b) +
                       f.value(-s, a + 1, 1, b) - 2.0 * f.value(-s, a, 1, b);
      g.at(s, a, b) = num * (s * inv[static_cast<std::size_t>(a - w.n1_min)]);
    });
  } else {
    g.for_each([&](int s, int a, int b) {
      const cplx num = f.value(s, a, 1, b - 1) + f.value(s, a, -1, b - 1) - f.value(s, a, 1, b + 1) +
                       f.value(s, a, -1, b + 1) - 2.0 * f.value(s, a, -1, b);
      g.at(s, a, b) = num * inv[static_cast<std::size_t>(b - w.n2_min)];
    });
  }
  return g;
}

GridFunction dq_mixed(const GridFunction& f, int beta1, int beta2) {
  if (beta1 < 0 || beta2 < 0) throw InvalidParams("dq_mixed: negative order");
  GridFunction g = f;
  for (int i = 0; i < beta2; ++i) g = dq_partial(g, 2);
  for (int i = 0; i < beta1; ++i) g = dq_partial(g, 1);
  return g;
}

namespace {

void require_even(const GridFunction& f, const char* who) {
  if (f.parity() != Parity::even) throw InvalidParams(std::string(who) + ": input must be even in x2");
}

// |x2|^{power} at each x2 exponent of the window, evaluated in log space.
std::vector<double> x2_power(const GridFunction& f, double power) {
  const auto& w = f.window();
  std::vector<double> v(static_cast<std::size_t>(w.size2()));
  const double lq = std::log(f.params().q);
  for (int b = w.n2_min; b <= w.n2_max; ++b) v[static_cast<std::size_t>(b - w.n2_min)] = std::exp(power * b * lq);
  return v;
}

}  // namespace

GridFunction multiply_by(const GridFunction& f, const std::function<cplx(double, double)>& gfun) {
  GridFunction g = f;
  const double q = f.params().q;
  g.for_each([&](int s, int a, int b) { g.at(s, a, b) *= gfun(s * std::pow(q, a), std::pow(q, b)); });
  return g;
}

GridFunction bessel_op(const GridFunction& f) {
  require_even(f, "bessel_op");
  const double k = 2.0 * f.params().alpha + 1.0;
  GridFunction g = dq_partial(f, 2);
  const auto up = x2_power(g, k);
  const auto& w = g.window();
  g.for_each([&](int s, int a, int b) { g.at(s, a, b) *= up[static_cast<std::size_t>(b - w.n2_min)]; });
  GridFunction h = dq_partial(g, 2);
  const auto down = x2_power(h, -k);
  h.for_each([&](int s, int a, int b) { h.at(s, a, b) *= down[static_cast<std::size_t>(b - w.n2_min)]; });
  return h;
}

namespace {

GridFunction expanded_with(const GridFunction& f, double coeff) {
  const double q = f.params().q;
  const double k = 2.0 * f.params().alpha + 1.0;
  GridFunction d1 = dq_partial(f, 2);
  GridFunction d2 = dq_partial(d1, 2);
  GridFunction out(f.params(), f.window().clean(), Parity::even);
  out.window().taint1 = d2.window().taint1;
  out.window().taint2 = d2.window().taint2;
  const double qk = std::pow(q, k);
  out.for_each([&](int s, int a, int b) {
    out.at(s, a, b) = qk * d2.at(s, a, b) + coeff / std::pow(q, b) * d1.at(s, a, b);
  });
  return out;
}

}  // namespace

GridFunction bessel_op_expanded(const GridFunction& f) {
  require_even(f, "bessel_op_expanded");
  const double k = 2.0 * f.params().alpha + 1.0;
  return expanded_with(f, qbracket_base(k, f.params().q));
}

GridFunction bessel_op_expanded_printed(const GridFunction& f) {
  require_even(f, "bessel_op_expanded_printed");
  const double q = f.params().q;
  const double k = 2.0 * f.params().alpha + 1.0;
  return expanded_with(f, -q * qbracket_base(-k, q));
}

GridFunction weinstein_op(const GridFunction& f, int n) {
  require_even(f, "weinstein_op");
  if (n < 0) throw InvalidParams("weinstein_op: negative power");
  GridFunction g = f;
  for (int i = 0; i < n; ++i) {
    GridFunction dx = dq_partial(dq_partial(g, 1), 1);
    GridFunction by = bessel_op(g);
    GridFunction next = dx;
    next += by;
    g = std::move(next);
  }
  return g;
}

}  // namespace qw
