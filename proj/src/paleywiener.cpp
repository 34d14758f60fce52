// SPDX-License-Identifier: Apache-2.0
#include "qw/paleywiener.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qw/hp.hpp"
#include "qw/qspecial.hpp"

namespace qw {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double support_radius(const GridFunction& f, double zero_tol) {
  if (zero_tol < 0.0) zero_tol = 1e-12 * f.max_abs();
  const double q = f.params().q;
  double r = 0.0;
  f.for_each([&](int s, int a, int b) {
    if (std::abs(f.at(s, a, b)) > zero_tol) r = std::max(r, std::hypot(std::pow(q, a), std::pow(q, b)));
  });
  return r;
}

std::vector<double> log_norm_growth(const GridFunction& f, int N) {
  if (N < 1) throw InvalidParams("log_norm_growth: N must be positive");
  const Measure mu{f.params(), MeasureKind::weighted_2d};
  const double q = f.params().q;
  struct Term {
    double log_base;  // log(w |f|^2)
    double log_r;     // log |x|
  };
  std::vector<Term> terms;
  f.for_each([&](int s, int a, int b) {
    const double v = std::abs(f.at(s, a, b));
    if (v == 0.0) return;
    terms.push_back({mu.log_weight(a, b) + 2.0 * std::log(v), std::log(std::hypot(std::pow(q, a), std::pow(q, b)))});
  });
  std::vector<double> out(static_cast<std::size_t>(N), kNegInf);
  if (terms.empty()) return out;
  for (int n = 1; n <= N; ++n) {
    // log sum exp of log_base + 4n log_r
    double mx = kNegInf;
    for (const auto& t : terms) mx = std::max(mx, t.log_base + 4.0 * n * t.log_r);
    std::vector<double> e;
    e.reserve(terms.size());
    for (const auto& t : terms) e.push_back(std::exp(t.log_base + 4.0 * n * t.log_r - mx));
    out[static_cast<std::size_t>(n - 1)] = (mx + std::log(sum_ascending(std::move(e)))) / (4.0 * n);
  }
  return out;
}

std::vector<double> norm_growth_sequence(const GridFunction& f, int N) {
  auto l = log_norm_growth(f, N);
  for (auto& v : l) v = std::exp(v);
  return l;
}

double extrapolate_radius(const std::vector<double>& a) {
  if (a.empty()) return 0.0;
  if (a.back() <= 0.0) return 0.0;
  const int N = static_cast<int>(a.size());
  if (N < 2) return a.back();
  const int first = N - std::max(2, N / 2) + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (int n = first; n <= N; ++n) {
    const double x = 1.0 / n, y = std::log(a[static_cast<std::size_t>(n - 1)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++k;
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  return std::exp((sy - slope * sx) / k);
}

namespace {

struct Preimage {
  GridFunction g;
  std::array<int, 4> box{};
  bool empty = true;
};

Preimage preimage_of(const GridFunction& F, const BandwidthOptions& opt) {
  const LatticeWindow W = F.window().clean();
  const LatticeWindow xw = opt.x_window.value_or(LatticeWindow(-W.n1_max, -W.n1_min, -W.n2_max, -W.n2_min));
  Preimage pre;
  pre.g = inverse(F, xw).grid;
  const double tol = opt.zero_tol_rel * pre.g.max_abs();
  for (auto& v : pre.g.data())
    if (std::abs(v) <= tol) v = 0.0;
  if (auto b = support_box(pre.g)) {
    pre.box = *b;
    pre.empty = false;
  }
  return pre;
}

// Lambda window for the literal route: the core plus the 2N layers on each
// side that N applications of Delta read.
struct LiteralSetup {
  LatticeWindow window;
  hp::Region core;
  long bits = 0;
};

LiteralSetup literal_setup(const GridFunction& F, const Preimage& pre, int N, double radius,
                           const BandwidthOptions& opt) {
  const LatticeWindow W = F.window().clean();
  const int c1 = -pre.box[0] + opt.core_margin, c2 = -pre.box[2] + opt.core_margin;
  LiteralSetup s;
  s.core = hp::Region{W.n1_min, c1, W.n2_min, c2};
  s.window = LatticeWindow(W.n1_min - 2 * N, c1 + 2 * N, W.n2_min - 2 * N, c2 + 2 * N);
  const double q = F.params().q;
  s.bits = opt.literal_bits > 0 ? opt.literal_bits : hp::plan_bits(q, 2 * N, std::pow(q, std::max(c1, c2)), radius, 64);
  return s;
}

hp::Region grown(const hp::Region& r, int k) { return {r.n1_lo - k, r.n1_hi + k, r.n2_lo - k, r.n2_hi + k}; }

}  // namespace

BandwidthReport bandwidth_estimate(const GridFunction& F, int N, const BandwidthOptions& opt) {
  if (N < 1) throw InvalidParams("bandwidth_estimate: N must be positive");
  if (F.parity() != Parity::even) throw InvalidParams("bandwidth_estimate: input must be even in x2");
  BandwidthReport rep;
  rep.n_used = N;
  const Preimage pre = preimage_of(F, opt);
  if (pre.empty) {
    rep.a_spectral.assign(static_cast<std::size_t>(N), 0.0);
    if (opt.literal) rep.a_seq.assign(static_cast<std::size_t>(N), 0.0);
    rep.diagnostic = "empty support";
    return rep;
  }
  rep.a_spectral = norm_growth_sequence(pre.g, N);
  rep.estimate_spectral = extrapolate_radius(rep.a_spectral);
  rep.oracle_radius = support_radius(pre.g, 0.0);
  rep.estimate = rep.estimate_spectral;

  if (opt.literal) {
    const LiteralSetup s = literal_setup(F, pre, N, rep.oracle_radius, opt);
    rep.bits_used = s.bits;
    hp::Grid H = hp::forward_hp(pre.g, s.window, s.bits);
    for (int n = 1; n <= N; ++n) {
      const hp::Region r = grown(s.core, 2 * (N - n));
      H = hp::delta(H, r);
      rep.a_seq.push_back(std::exp(hp::log_norm_sq(H, s.core) / (4.0 * n)));
    }
    for (int i = 0; i < N; ++i) {
      const double a = rep.a_seq[static_cast<std::size_t>(i)], b = rep.a_spectral[static_cast<std::size_t>(i)];
      rep.route_disagreement = std::max(rep.route_disagreement, std::fabs(a - b) / b);
    }
    if (!std::isfinite(rep.route_disagreement)) rep.route_disagreement = std::numeric_limits<double>::infinity();
    rep.routes_agree = rep.route_disagreement <= opt.route_tol;
    if (!rep.routes_agree) rep.diagnostic = "literal and spectral sequences disagree; window or precision too small";
    rep.estimate = extrapolate_radius(rep.a_seq);
  }
  const double r = rep.oracle_radius;
  rep.rel_err_radius = std::fabs(rep.estimate - r) / r;
  rep.rel_err_radius_sq = std::fabs(rep.estimate - r * r) / (r * r);
  rep.reading = rep.rel_err_radius <= rep.rel_err_radius_sq ? "radius" : "radius^2";
  return rep;
}

void PWmParams::validate(double alpha) const {
  if (!(m > alpha + 1.5)) throw InvalidParams("PW^m: m must exceed alpha + 3/2");
  if (!(a > 0.0)) throw InvalidParams("PW^m: a must be positive");
  if (N < m) throw InvalidParams("PW^m: N must be at least m");
}

double pw_B(int n, int m, double q) {
  double den = 1.0;
  for (int k = 0; k < 2 * m; ++k) den *= 1.0 - std::pow(q, 2 * n - k);
  const double v = std::pow(1.0 - q, 2 * m) / den;
  return v * v;
}

PWmReport pw_m_sup(const GridFunction& F, const PWmParams& prm, const BandwidthOptions& opt) {
  const QParams& p = F.params();
  prm.validate(p.alpha);
  PWmReport rep;
  const Preimage pre = preimage_of(F, opt);
  if (pre.empty) {
    for (int n = prm.m; n <= prm.N; ++n) {
      rep.n.push_back(n);
      rep.log_value.push_back(kNegInf);
      rep.running_sup.push_back(0.0);
    }
    return rep;
  }
  const double radius = support_radius(pre.g, 0.0);
  const LiteralSetup s = literal_setup(F, pre, prm.N, radius, opt);
  rep.bits_used = s.bits;
  const double q = p.q;
  hp::Grid H = hp::forward_hp(pre.g, s.window, s.bits);
  double running = 0.0;
  for (int n = 1; n <= prm.N; ++n) {
    const hp::Region r = grown(s.core, 2 * (prm.N - n));
    H = hp::delta(H, r);
    if (n < prm.m) continue;
    const double base = std::log(pw_B(n, prm.m, q)) - 2.0 * n * std::log(prm.a);
    double best = kNegInf;
    hp::for_each_log_abs(H, s.core, [&](int, int a, int b, double la) {
      const double x2 = std::pow(q, 2 * a) + std::pow(q, 2 * b);
      best = std::max(best, base + prm.m * std::log1p(x2) + la);
    });
    rep.n.push_back(n);
    rep.log_value.push_back(best);
    running = std::max(running, std::exp(best));
    rep.running_sup.push_back(running);
    rep.log_bound.push_back(log_pw_m_bound(pre.g, prm.m, prm.a, n));
  }
  rep.sup = running;
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

double choose(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// [n]^{(p)} = prod_{l<p} [n-l]_q
double falling_bracket(int n, int p, double q) {
  double r = 1.0;
  for (int l = 0; l < p; ++l) r *= qbracket_base(n - l, q);
  return r;
}

GridFunction padded(const GridFunction& f, int layers) {
  const auto box = support_box(f);
  if (!box) return f;
  const auto [a, b, c, d] = *box;
  return f.resized(LatticeWindow(a - layers, b + layers, c - layers, d + layers));
}

double sup_D(const GridFunction& fp, int k1, int k2) { return dq_mixed(fp, k1, k2).max_abs(); }

}  // namespace

double monomial_constant(const GridFunction& f, double R, int p) {
  if (R <= 0.0) return 0.0;
  const double q = f.params().q;
  const GridFunction fp = padded(f, p + 2);
  std::vector<std::vector<double>> norms(static_cast<std::size_t>(p + 1), std::vector<double>(static_cast<std::size_t>(p + 1)));
  for (int k1 = 0; k1 <= p; ++k1)
    for (int k2 = 0; k2 <= p; ++k2) norms[static_cast<std::size_t>(k1)][static_cast<std::size_t>(k2)] = sup_D(fp, k1, k2);
  double best = 0.0;
  for (int p1 = 0; p1 <= p; ++p1)
    for (int p2 = 0; p2 <= p; ++p2) {
      double sum = 0.0;
      for (int j1 = 0; j1 <= p1; ++j1)
        for (int j2 = 0; j2 <= p2; ++j2)
          sum += choose(p1, j1) * choose(p2, j2) * std::pow(std::pow(q, -p1) * R, -j1) *
                 std::pow(std::pow(q, -p2) * R, -j2) * norms[static_cast<std::size_t>(p1 - j1)][static_cast<std::size_t>(p2 - j2)];
      best = std::max(best, std::pow(2.0, p1 + p2) * std::pow(q, -(p1 * p1 + p2 * p2)) * sum);
    }
  return best;
}

BoundCheck monomial_derivative_bound_check(const GridFunction& f, int n1, int n2, int p1, int p2, int p) {
  if (p1 < 0 || p2 < 0 || p1 > p || p2 > p || !(p < n1) || !(p < n2))
    throw InvalidParams("monomial bound: requires p1, p2 <= p < n1, n2");
  BoundCheck r;
  const double R = support_radius(f, 0.0);
  if (R == 0.0) return r;
  const double q = f.params().q;
  GridFunction h = multiply_by(padded(f, p + 2), [&](double x1, double x2) { return std::pow(x1, n1) * std::pow(x2, n2); });
  if (n2 % 2 != 0) h.set_parity(flip(f.parity()));
  const GridFunction D = dq_mixed(h, p1, p2);
  r.lhs = D.max_abs();
  r.support = support_radius(D, 0.0);
  r.constant = monomial_constant(f, R, p);
  r.rhs = r.constant * std::pow(R / std::pow(q, 2 * p), n1 + n2) * falling_bracket(n1, p, q) * falling_bracket(n2, p, q);
  return r;
}

BoundCheck corollary_bound_check(const GridFunction& f, int n, int i, int j, int p) {
  if (i < 0 || j < 0 || i > p || j > p || p > n) throw InvalidParams("corollary bound: requires i, j <= p <= n");
  BoundCheck r;
  const double R = support_radius(f, 0.0);
  if (R == 0.0) return r;
  const double q = f.params().q;
  GridFunction h = multiply_by(padded(f, 2 * p + 2), [&](double x1, double x2) { return std::pow(x1 * x1 + x2 * x2, n); });
  const GridFunction D = dq_mixed(h, 2 * i, 2 * j);
  r.lhs = D.max_abs();
  r.support = support_radius(D, 0.0);
  r.constant = monomial_constant(f, R, 2 * p);
  const double fb = falling_bracket(2 * n, 2 * p, q);
  r.rhs = std::pow(2.0, n) * r.constant * std::pow(R / std::pow(q, 4 * p), 2 * n) * fb * fb;
  return r;
}

double weinstein_constant(int k, const QParams& p) {
  const double kk = 2.0 * p.alpha + 1.0;
  return std::pow(1.0 + std::pow(p.q, kk) + std::fabs(qbracket_base(kk, p.q)), k);
}

BoundCheck weinstein_sup_bound_check(const GridFunction& f, int k) {
  if (k < 0) throw InvalidParams("weinstein bound: k must be non-negative");
  BoundCheck r;
  const GridFunction fp = padded(f, 2 * k + 2);
  r.lhs = weinstein_op(fp, k).max_abs();
  double mx = 0.0;
  for (int p1 = 0; p1 <= k; ++p1)
    for (int p2 = 0; p2 <= k; ++p2) mx = std::max(mx, sup_D(fp, 2 * p1, 2 * p2));
  r.constant = weinstein_constant(k, f.params());
  r.rhs = r.constant * mx;
  r.support = support_radius(weinstein_op(fp, k), 0.0);
  return r;
}

double log_pw_m_bound(const GridFunction& f, int m, double a, int n) {
  const QParams& p = f.params();
  const double q = p.q;
  const auto box = support_box(f);
  if (!box) return kNegInf;
  const double R = support_radius(f, 0.0);
  const auto [b_lo, b_hi, d_lo, d_hi] = *box;
  const Measure mu{p, MeasureKind::weighted_2d};
  std::vector<double> w;
  for (int b = b_lo - 2 * m; b <= b_hi + 2 * m; ++b)
    for (int d = d_lo - 2 * m; d <= d_hi + 2 * m; ++d) w.push_back(2.0 * mu.weight(b, d));
  const double mass = sum_ascending(std::move(w));
  double ck = 0.0;
  for (int k = 0; k <= m; ++k) ck += choose(m, k) * weinstein_constant(k, p);
  const double lead = std::log(normalization_K(p) * kernel_bound(p) * mass * ck * monomial_constant(f, R, 2 * m));
  return lead + n * std::log(2.0) + 2.0 * n * std::log(R / (a * std::pow(q, 4 * m))) + std::log(pw_B(n, m, q)) +
         2.0 * std::log(falling_bracket(2 * n, 2 * m, q));
}

double sonine_identity_check(double alpha, int p, const std::vector<double>& ys, double q, const TruncationPolicy& pol) {
  if (p < 1) throw InvalidParams("sonine: p must be at least 1");
  const QParams P(q, alpha);
  const double b = q * q;
  const double c = (1.0 + q) * qgamma_base(alpha + p + 1.0, b) / (qgamma_base(alpha + 1.0, b) * qgamma_base(p, b));
  double worst = 0.0;
  for (double y : ys) {
    const double lhs = mp::bessel_j_real(alpha + p, y, q);
    const auto integ = jackson_0_to_a(
        [&](double t) {
          return cplx(sonine_weight(p, t, P, pol) * mp::bessel_j_real(alpha, y * t, q) * std::pow(t, 2.0 * alpha + 1.0), 0.0);
        },
        1.0, P, pol);
    worst = std::max(worst, std::fabs(lhs - c * integ.value.real()));
  }
  return worst;
}

}  // namespace qw
