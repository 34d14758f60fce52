// SPDX-License-Identifier: Apache-2.0
#include "qw/qweinstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qw/hp.hpp"

namespace qw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_even(const GridFunction& f, const char* who) {
  if (f.parity() != Parity::even) throw InvalidParams(std::string(who) + ": input must be even in x2");
}

// e(-i u;q^2) j_a(v;q^2) for real u, v.
cplx kernel_real(double u, double v, const QParams& p) {
  const double q = p.q;
  const double c = mp::bessel_j_real(-0.5, u, q);
  const double s = u * mp::bessel_j_real(0.5, u, q);
  return cplx(c, -s) * mp::bessel_j_real(p.alpha, v, q);
}

}  // namespace

cplx kernel_eval(cplx lambda1, cplx lambda2, const LatticePoint& x1, const LatticePoint& x2, const QParams& p,
                 const TruncationPolicy& pol) {
  p.validate();
  const double x1v = x1.value(p.q), x2v = x2.value(p.q);
  if (lambda1.imag() == 0.0 && lambda2.imag() == 0.0) return kernel_real(lambda1.real() * x1v, lambda2.real() * x2v, p);
  const cplx e = qexp(cplx(0.0, -1.0) * lambda1 * x1v, p, pol);
  return e * bessel_j(p.alpha, lambda2 * x2v, p, pol).value;
}

cplx kernel_lattice(const LatticePoint& l1, const LatticePoint& l2, const LatticePoint& x1, const LatticePoint& x2,
                    const QParams& p) {
  const int k1 = l1.exponent + x1.exponent, k2 = l2.exponent + x2.exponent;
  auto& t = kernel_table(p, std::min(k1, k2), std::max(k1, k2));
  return t.e_minus_i(l1.sign * x1.sign, k1) * t.j(k2);
}

double normalization_K(const QParams& p) {
  p.validate();
  const double b = p.q * p.q;
  return std::pow(1.0 + p.q, 0.5 - p.alpha) / (2.0 * qgamma_base(0.5, b) * qgamma_base(p.alpha + 1.0, b));
}

double kernel_bound(const QParams& p) {
  const double e = qpoch_inf(p.q, p.q);
  return 4.0 / (e * e);
}

std::optional<std::array<int, 4>> support_box(const GridFunction& f, double zero_tol) {
  std::array<int, 4> box{std::numeric_limits<int>::max(), std::numeric_limits<int>::min(),
                         std::numeric_limits<int>::max(), std::numeric_limits<int>::min()};
  bool any = false;
  f.for_each([&](int s, int a, int b) {
    if (std::abs(f.at(s, a, b)) > zero_tol) {
      any = true;
      box[0] = std::min(box[0], a);
      box[1] = std::max(box[1], a);
      box[2] = std::min(box[2], b);
      box[3] = std::max(box[3], b);
    }
  });
  if (!any) return std::nullopt;
  return box;
}

namespace {

// Shared body of forward and inverse.  `sign` multiplies the first kernel
// argument: +1 gives Lambda_l(x), -1 gives Lambda_l(-x).
GridFunction transform_impl(const GridFunction& f, const LatticeWindow& out, int sign) {
  const QParams& p = f.params();
  GridFunction F(p, out.clean(), Parity::even);
  const auto box = support_box(f);
  if (!box) return F;
  const auto [b_lo, b_hi, d_lo, d_hi] = *box;
  const double q = p.q, lq = std::log(q);
  const int k1_lo = out.n1_min + b_lo, k1_hi = out.n1_max + b_hi;
  const int k2_lo = out.n2_min + d_lo, k2_hi = out.n2_max + d_hi;
  const KernelTable& tab = kernel_table(p, std::min(k1_lo, k2_lo), std::max(k1_hi, k2_hi));

  const int nb = b_hi - b_lo + 1, nc = out.size2();
  // G(s, b, c) = sum_d (1-q) q^{(2a+2)d} f(s,b,d) j(q^{c+d})
  std::vector<cplx> G(static_cast<std::size_t>(2 * nb * nc));
  auto gi = [&](int s, int b, int c) {
    return (static_cast<std::size_t>(s > 0 ? 0 : 1) * nb + static_cast<std::size_t>(b - b_lo)) * nc +
           static_cast<std::size_t>(c - out.n2_min);
  };
  std::vector<double> w2(static_cast<std::size_t>(d_hi - d_lo + 1));
  for (int d = d_lo; d <= d_hi; ++d)
    w2[static_cast<std::size_t>(d - d_lo)] = (1.0 - q) * std::exp((2.0 * p.alpha + 2.0) * d * lq);
  for (int s : {1, -1})
    for (int b = b_lo; b <= b_hi; ++b)
      for (int c = out.n2_min; c <= out.n2_max; ++c) {
        NeumaierC acc;
        for (int d = d_lo; d <= d_hi; ++d) {
          const cplx v = f.at(s, b, d);
          if (v == cplx(0.0, 0.0)) continue;
          acc.add(w2[static_cast<std::size_t>(d - d_lo)] * tab.j(c + d) * v);
        }
        G[gi(s, b, c)] = acc.value();
      }

  const double K = normalization_K(p);
  for (int t : {1, -1})
    for (int a = out.n1_min; a <= out.n1_max; ++a)
      for (int c = out.n2_min; c <= out.n2_max; ++c) {
        NeumaierC acc;
        for (int s : {1, -1})
          for (int b = b_lo; b <= b_hi; ++b) {
            const cplx g = G[gi(s, b, c)];
            if (g == cplx(0.0, 0.0)) continue;
            const double w1 = (1.0 - q) * std::exp(b * lq);
            acc.add(w1 * tab.e_minus_i(sign * t * s, a + b) * g);
          }
        F.at(t, a, c) = K * acc.value();
      }
  return F;
}

TransformResult finish(GridFunction F, const TruncationPolicy& pol) {
  TransformResult r;
  r.policy_used = pol;
  if (!F.all_finite()) {
    r.converged = false;
    r.tail_bound = kInf;
    r.diagnostic = "non-finite transform values: kernel unbounded on this lattice";
  } else {
    r.tail_bound = spectral_tail(F);
    r.converged = r.tail_bound <= 1e-8;
    if (!r.converged) r.diagnostic = "window tail above 1e-8";
  }
  r.grid = std::move(F);
  return r;
}

TruncationPolicy policy_for(const LatticeWindow& w, const TruncationPolicy& pol) {
  TruncationPolicy p = pol;
  p.n_min = std::min(w.n1_min, w.n2_min);
  p.n_max = std::max(w.n1_max, w.n2_max);
  if (p.n_min == p.n_max) ++p.n_max;
  return p;
}

}  // namespace

TransformResult forward(const GridFunction& f, const LatticeWindow& lambda_window, const TruncationPolicy& pol) {
  require_even(f, "forward");
  return finish(transform_impl(f, lambda_window, 1), policy_for(lambda_window, pol));
}

TransformResult inverse(const GridFunction& F, const LatticeWindow& x_window, const TruncationPolicy& pol) {
  require_even(F, "inverse");
  return finish(transform_impl(F, x_window, -1), policy_for(x_window, pol));
}

namespace {

// Relative L2 mass expected outside each side of the window:
// {far1, near1, far2, near2}.  Far sides are at n_min (large |lambda|).
std::array<double, 4> side_tails(const GridFunction& F) {
  const auto& w = F.window();
  const QParams& p = F.params();
  const Measure mu{p, MeasureKind::weighted_2d};
  std::vector<double> row1(static_cast<std::size_t>(w.size1()), 0.0), row2(static_cast<std::size_t>(w.size2()), 0.0);
  double total = 0.0;
  F.for_each([&](int s, int a, int b) {
    const double v = std::abs(F.at(s, a, b));
    if (v == 0.0) return;
    const double m = std::exp(mu.log_weight(a, b) + 2.0 * std::log(v));
    row1[static_cast<std::size_t>(a - w.n1_min)] += m;
    row2[static_cast<std::size_t>(b - w.n2_min)] += m;
    total += m;
  });
  std::array<double, 4> t{0.0, 0.0, 0.0, 0.0};
  if (total == 0.0) return t;
  auto geo = [](double last, double prev, double floor_rate) {
    if (last == 0.0) return 0.0;
    if (prev == 0.0) return kInf;
    const double r = std::max(last / prev, floor_rate);
    return r < 1.0 ? last * r / (1.0 - r) : kInf;
  };
  auto near = [&](const std::vector<double>& row, double rate) {
    return row.size() < 2 ? kInf : geo(row.back(), row[row.size() - 2], rate);
  };
  // Far layers oscillate before the kernel's super-geometric decay sets in;
  // with no decay between the outer two layers, charge the outer three layers
  // four times over instead of giving up.
  auto far = [&](const std::vector<double>& row) {
    if (row.size() < 3) return kInf;
    const double g = geo(row.front(), row[1], 0.0);
    return std::isfinite(g) ? g : 4.0 * (row[0] + row[1] + row[2]);
  };
  t[0] = far(row1) / total;
  t[1] = near(row1, p.q) / total;
  t[2] = far(row2) / total;
  t[3] = near(row2, std::pow(p.q, 2.0 * p.alpha + 2.0)) / total;
  return t;
}

}  // namespace

double spectral_tail(const GridFunction& F) {
  const auto t = side_tails(F);
  return t[0] + t[1] + t[2] + t[3];
}

WindowChoice choose_lambda_window(const GridFunction& f, double target, int max_span) {
  require_even(f, "choose_lambda_window");
  WindowChoice wc;
  const auto box = support_box(f);
  if (!box) {
    wc.window = LatticeWindow(0, 0, 0, 0);
    return wc;
  }
  const auto [b_lo, b_hi, d_lo, d_hi] = *box;
  // Margins beyond the support on the far (large lambda) and near (small lambda) sides.
  std::array<int, 4> m{6, 8, 6, 8};
  std::array<double, 4> prev{kInf, kInf, kInf, kInf};
  std::array<int, 4> stalls{0, 0, 0, 0};
  for (int round = 1;; ++round) {
    const LatticeWindow w(-b_hi - m[0], -b_lo + m[1], -d_hi - m[2], -d_lo + m[3]);
    if (w.size1() > max_span || w.size2() > max_span)
      throw DivergenceError("lambda window exceeded " + std::to_string(max_span) + " exponents without meeting the tail target");
    GridFunction F = transform_impl(f, w, 1);
    if (!F.all_finite()) throw DivergenceError("transform values overflow: the kernel is unbounded on this lattice");
    {
      // On a lattice where Plancherel holds the kernel never exceeds its
      // uniform bound; a violation means no window can converge.
      const KernelTable& tab = kernel_table(F.params(), std::min(w.n1_min + b_lo, w.n2_min + d_lo),
                                            std::max(w.n1_max + b_hi, w.n2_max + d_hi));
      const double bound = kernel_bound(F.params());
      for (int k = tab.kmin(); k <= tab.kmax(); ++k)
        if (std::abs(tab.e_minus_i(1, k)) > bound || std::fabs(tab.j(k)) > bound)
          throw DivergenceError("kernel value at argument q^" + std::to_string(k) +
                                " exceeds 4/(q;q)^2: q is off the lattice where the transform is bounded");
    }
    const auto t = side_tails(F);
    const double total = t[0] + t[1] + t[2] + t[3];
    wc.window = w;
    wc.tail = total;
    wc.rounds = round;
    if (total < target) return wc;
    for (int i = 0; i < 4; ++i) {
      if (!(t[i] > target / 8.0)) continue;
      if (i % 2 == 0) {
        // Far layers must keep shrinking as the window grows; otherwise the
        // transform does not decay and no window can capture it.
        stalls[i] = t[i] < prev[i] ? 0 : stalls[i] + 1;
        if (stalls[i] >= 6) throw DivergenceError("far layers of the transform do not decay");
      }
      prev[i] = t[i];
      m[static_cast<std::size_t>(i)] += std::max(4, m[static_cast<std::size_t>(i)] / 3);
    }
  }
}

TransformResult forward_auto(const GridFunction& f, double target, int max_span) {
  const WindowChoice wc = choose_lambda_window(f, target, max_span);
  TransformResult r = forward(f, wc.window);
  r.diagnostic = "window chosen in " + std::to_string(wc.rounds) + " rounds";
  return r;
}

double IdentityReport::max() const {
  double m = std::max(c, d);
  for (const auto& row : a)
    for (double v : row) m = std::max(m, v);
  for (const auto& row : b)
    for (double v : row) m = std::max(m, v);
  return m;
}

namespace {

// Relative weighted L2 distance of lhs and rhs over points where `keep` holds.
template <class Keep>
double rel_l2(const GridFunction& lhs, const GridFunction& rhs, Keep keep) {
  const Measure mu{lhs.params(), MeasureKind::weighted_2d};
  std::vector<double> num, den;
  lhs.for_each([&](int s, int a, int b) {
    if (!keep(a, b)) return;
    const double lw = mu.log_weight(a, b);
    const double d = std::abs(lhs.at(s, a, b) - rhs.at(s, a, b));
    const double r = std::abs(rhs.at(s, a, b));
    if (d > 0.0) num.push_back(std::exp(lw + 2.0 * std::log(d)));
    if (r > 0.0) den.push_back(std::exp(lw + 2.0 * std::log(r)));
  });
  const double n = sum_ascending(std::move(num)), dd = sum_ascending(std::move(den));
  if (dd == 0.0) return n == 0.0 ? 0.0 : kInf;
  return std::sqrt(n / dd);
}

cplx ipow(int n) {
  static const cplx u[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return u[((n % 4) + 4) % 4];
}

GridFunction bessel_pow(GridFunction g, int p) {
  for (int i = 0; i < p; ++i) g = bessel_op(g);
  return g;
}

}  // namespace

IdentityReport identity_suite(const GridFunction& f, const GridFunction& g, const LatticeWindow& lw, int max_order) {
  require_even(f, "identity_suite");
  require_even(g, "identity_suite");
  if (max_order < 0 || max_order > 2) throw InvalidParams("identity_suite: max_order must be in 0..2");
  IdentityReport rep;
  const QParams& p = f.params();
  const double q = p.q;
  const auto box = support_box(f);
  if (!box) return rep;

  // Compact support: a zero-padded copy makes every stencil exact on the support.
  const int pad = 2 * (3 * max_order + 2);
  const auto [b_lo, b_hi, d_lo, d_hi] = *box;
  const LatticeWindow xw(b_lo - pad, b_hi + pad, d_lo - pad, d_hi + pad);
  const GridFunction fp = f.resized(xw);
  const GridFunction F = transform_impl(fp, lw, 1);
  auto all = [](int, int) { return true; };

  // (a) F(d^n B^p f) = (i l1)^n (i l2)^{2p} F f
  for (int n = 0; n <= max_order; ++n)
    for (int pp = 0; pp <= max_order; ++pp) {
      GridFunction op = dq_mixed(bessel_pow(fp, pp), n, 0);
      op.window() = op.window().clean();
      const GridFunction lhs = transform_impl(op, lw, 1);
      GridFunction rhs = F;
      rhs.for_each([&](int s, int a, int c) {
        const double l1 = s * std::pow(q, a), l2 = std::pow(q, c);
        rhs.at(s, a, c) *= ipow(n + 2 * pp) * std::pow(l1, n) * std::pow(l2, 2 * pp);
      });
      rep.a[static_cast<std::size_t>(n)][static_cast<std::size_t>(pp)] = rel_l2(lhs, rhs, all);
    }

  // (b) F(x1^n x2^{2p} f) = i^{n+2p} d^n B^p (F f), operators in the lambda variable.
  const int dmax = 3 * max_order;
  // Stencils reach both neighbours; padding the far side as well keeps the
  // comparison exact when F does not decay there.
  const LatticeWindow padded = lw.grown(2 * dmax);
  double rsupp = 0.0;
  f.for_each([&](int s, int a, int b) {
    if (f.at(s, a, b) != cplx(0.0, 0.0)) rsupp = std::max(rsupp, std::hypot(std::pow(q, a), std::pow(q, b)));
  });
  const double lam_min = std::pow(q, std::max(lw.n1_max, lw.n2_max));
  const long bits = hp::plan_bits(q, dmax, lam_min, rsupp, 80);
  const hp::Grid Fh = hp::forward_hp(fp, padded, bits);
  for (int n = 0; n <= max_order; ++n)
    for (int pp = 0; pp <= max_order; ++pp) {
      GridFunction m = multiply_by(fp, [&](double x1, double x2) { return std::pow(x1, n) * std::pow(x2, 2 * pp); });
      const GridFunction lhs = transform_impl(m, lw, 1);
      hp::Grid h = Fh;
      for (int i = 0; i < pp; ++i) h = hp::bessel(h);
      for (int i = 0; i < n; ++i) h = hp::dx(h);
      GridFunction rhs = h.to_double().resized(lw);
      rhs *= ipow(n + 2 * pp);
      rep.b[static_cast<std::size_t>(n)][static_cast<std::size_t>(pp)] = rel_l2(lhs, rhs, all);
    }

  // (c) F(Delta f) = -|l|^2 F f
  {
    GridFunction op = weinstein_op(fp, 1);
    op.window() = op.window().clean();
    const GridFunction lhs = transform_impl(op, lw, 1);
    GridFunction rhs = F;
    rhs.for_each([&](int s, int a, int c) {
      rhs.at(s, a, c) *= -(std::pow(q, 2 * a) + std::pow(q, 2 * c));
      (void)s;
    });
    rep.c = rel_l2(lhs, rhs, all);
  }

  // (d) int F(f) g = int f F(g), scaled by ||f||_2 ||g||_2.
  {
    const GridFunction Ff = transform_impl(f, g.window().clean(), 1);
    const GridFunction Fg = transform_impl(g, f.window().clean(), 1);
    const cplx lhs = integrate_product(Ff, g.resized(g.window().clean()));
    const cplx rhs = integrate_product(f.resized(f.window().clean()), Fg);
    const double scale = lp_norm(f, 2.0) * lp_norm(g, 2.0);
    rep.d = scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  }
  return rep;
}

OrthogonalityResult orthogonality_check(const LatticePoint& x1, const LatticePoint& x2, const LatticePoint& y1,
                                        const LatticePoint& y2, const QParams& p, int max_shells, double tol) {
  p.validate();
  if (max_shells < 1) throw InvalidParams("orthogonality_check: max_shells must be positive");
  const double q = p.q, lq = std::log(q);
  const int ex_lo = std::min({x1.exponent, x2.exponent, y1.exponent, y2.exponent});
  const int ex_hi = std::max({x1.exponent, x2.exponent, y1.exponent, y2.exponent});
  const KernelTable& tab = kernel_table(p, ex_lo - 1, ex_hi + 1);

  // The lambda sum factorizes: S1 over signed lambda1, S2 over lambda2 > 0.
  // Shell k covers exponents with max(|a|,|c|) = k, so the box sum after k
  // shells is S1(k) S2(k).
  auto term1 = [&](int a) {
    cplx v = 0.0;
    for (int t : {1, -1})
      v += tab.e_minus_i(t * x1.sign, a + x1.exponent) * std::conj(tab.e_minus_i(t * y1.sign, a + y1.exponent));
    return (1.0 - q) * std::exp(a * lq) * v;
  };
  auto term2 = [&](int c) {
    return (1.0 - q) * std::exp((2.0 * p.alpha + 2.0) * c * lq) * tab.j(c + x2.exponent) * tab.j(c + y2.exponent);
  };
  NeumaierC s1;
  Neumaier s2;
  s1.add(term1(0));
  s2.add(term2(0));
  OrthogonalityResult r;
  cplx prev = s1.value() * s2.value();
  for (int k = 1; k <= max_shells; ++k) {
    kernel_table(p, ex_lo - k, ex_hi + k);
    s1.add(term1(k));
    s1.add(term1(-k));
    s2.add(term2(k));
    s2.add(term2(-k));
    const cplx cur = s1.value() * s2.value();
    r.last_shell = std::abs(cur - prev);
    r.shells = k;
    prev = cur;
    if (k > 4 && r.last_shell <= tol * std::abs(cur)) break;
  }
  r.sum = prev;
  const double K = normalization_K(p);
  const double diag =
      1.0 / (K * K * (1.0 - q) * (1.0 - q) * std::pow(q, x1.exponent) * std::pow(q, (2.0 * p.alpha + 2.0) * x2.exponent));
  const bool same = x1 == y1 && x2 == y2;
  r.predicted = same ? diag : 0.0;
  r.scale = diag;
  return r;
}

}  // namespace qw
