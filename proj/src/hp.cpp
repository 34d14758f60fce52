// SPDX-License-Identifier: Apache-2.0
#include "qw/hp.hpp"

#include <algorithm>
#include <cmath>

#include "qw/kernel_table.hpp"
#include "qw/qweinstein.hpp"

namespace qw::hp {

Grid::Grid(const QParams& p, const LatticeWindow& w, Parity par, long bits)
    : params_(p), window_(w), parity_(par), bits_(bits) {
  w.validate();
  re_.reserve(w.points());
  im_.reserve(w.points());
  for (std::size_t i = 0; i < w.points(); ++i) {
    re_.emplace_back(bits);
    im_.emplace_back(bits);
  }
}

GridFunction Grid::to_double() const {
  GridFunction g(params_, window_.clean(), parity_);
  g.window() = window_;
  g.for_each([&](int s, int a, int b) {
    const std::size_t i = index(s, a, b);
    g.at(s, a, b) = cplx(re_[i].to_double(), im_[i].to_double());
  });
  return g;
}

long plan_bits(double q, int derivs, double lambda_min, double radius, long target_bits) {
  if (derivs <= 0) return std::max<long>(target_bits + 64, 128);
  const double d = derivs;
  const double scale = (1.0 - q) * lambda_min * radius;
  const double path = scale > 0.0 ? std::max(0.0, -d * std::log2(scale)) : 0.0;
  const double ladder = 0.5 * d * (d + 1.0) * -std::log2(q);
  // Rounded up to a multiple of 256 so nearby plans share cached kernel tables.
  const long need = std::max<long>(128, static_cast<long>(std::ceil(path + ladder + 2.0 * d)) + target_bits + 64);
  return (need + 255) / 256 * 256;
}

namespace {

// Stencil factor stored at the fewest bits that represent it exactly, so
// multiplications by powers of two stay cheap.
mp::Real trimmed(mp::Real v) {
  const long need = std::max<long>(static_cast<long>(mpfr_min_prec(v.get())), MPFR_PREC_MIN);
  if (need < v.bits()) mpfr_prec_round(v.get(), need, MPFR_RNDN);
  return v;
}

// 1/(scale (1-q) q^n) for n in [lo, hi]
std::vector<mp::Real> inv_steps(double q, int lo, int hi, long scale, long bits) {
  std::vector<mp::Real> v;
  v.reserve(static_cast<std::size_t>(hi - lo + 1));
  mp::Real oneq = mp::one_minus(q, bits);
  mpfr_mul_si(oneq.get(), oneq.get(), scale, MPFR_RNDN);
  for (int n = lo; n <= hi; ++n) {
    mp::Real c = mp::pow_int(q, n, bits);
    mpfr_mul(c.get(), c.get(), oneq.get(), MPFR_RNDN);
    mpfr_ui_div(c.get(), 1, c.get(), MPFR_RNDN);
    v.push_back(trimmed(std::move(c)));
  }
  return v;
}

Region full(const LatticeWindow& w) { return Region{w.n1_min, w.n1_max, w.n2_min, w.n2_max}; }

Region clip(const Region& r, const LatticeWindow& w) {
  return Region{std::max(r.n1_lo, w.n1_min), std::min(r.n1_hi, w.n1_max), std::max(r.n2_lo, w.n2_min),
                std::min(r.n2_hi, w.n2_max)};
}

// out += d_1 f (or out = d_1 f when `add` is false) on the region.
void dx_into(const Grid& f, Grid& out, const Region& r) {
  const auto& w = f.window();
  const long bits = f.bits();
  const auto inv = inv_steps(f.params().q, w.n1_min, w.n1_max, 2, bits);
  mp::Real num(bits);
  auto ptr = [&](bool real, int s, int a, int b) -> mpfr_srcptr {
    if (!w.contains(a, b)) return nullptr;
    const std::size_t i = f.index(s, a, b);
    return real ? f.re(i).get() : f.im(i).get();
  };
  for (int s : {1, -1})
    for (int a = r.n1_lo; a <= r.n1_hi; ++a)
      for (int b = r.n2_lo; b <= r.n2_hi; ++b)
        for (bool real : {true, false}) {
          mpfr_set_zero(num.get(), 1);
          if (auto p = ptr(real, s, a - 1, b)) mpfr_add(num.get(), num.get(), p, MPFR_RNDN);
          if (auto p = ptr(real, -s, a - 1, b)) mpfr_add(num.get(), num.get(), p, MPFR_RNDN);
          if (auto p = ptr(real, s, a + 1, b)) mpfr_sub(num.get(), num.get(), p, MPFR_RNDN);
          if (auto p = ptr(real, -s, a + 1, b)) mpfr_add(num.get(), num.get(), p, MPFR_RNDN);
          if (auto p = ptr(real, -s, a, b)) {
            mpfr_sub(num.get(), num.get(), p, MPFR_RNDN);
            mpfr_sub(num.get(), num.get(), p, MPFR_RNDN);
          }
          const std::size_t i = out.index(s, a, b);
          mpfr_ptr dst = real ? out.re(i).get() : out.im(i).get();
          mpfr_mul(dst, num.get(), inv[static_cast<std::size_t>(a - w.n1_min)].get(), MPFR_RNDN);
          if (s < 0) mpfr_neg(dst, dst, MPFR_RNDN);
        }
}

// out (+)= B f on the region, f even in x2:
// g(c) = (f(c-1) - f(c)) / ((1-q) q^c),  B f(c) = (g(c) - q^{2a+1} g(c+1)) / ((1-q) q^c)
void bessel_into(const Grid& f, Grid& out, const Region& r, bool add) {
  const auto& w = f.window();
  const long bits = f.bits();
  const double q = f.params().q;
  const auto inv = inv_steps(q, r.n2_lo, r.n2_hi + 1, 1, bits);
  const mp::Real qk = trimmed(mp::pow_real(q, 2.0 * f.params().alpha + 1.0, bits));
  const int nc = r.n2_hi - r.n2_lo + 2;
  std::vector<mp::Real> g;
  g.reserve(static_cast<std::size_t>(nc));
  for (int i = 0; i < nc; ++i) g.emplace_back(bits);
  mp::Real t(bits);
  auto val = [&](bool real, int s, int a, int b) -> mpfr_srcptr {
    if (!w.contains(a, b)) return nullptr;
    const std::size_t i = f.index(s, a, b);
    return real ? f.re(i).get() : f.im(i).get();
  };
  for (int s : {1, -1})
    for (int a = r.n1_lo; a <= r.n1_hi; ++a)
      for (bool real : {true, false}) {
        for (int c = r.n2_lo; c <= r.n2_hi + 1; ++c) {
          mpfr_ptr gc = g[static_cast<std::size_t>(c - r.n2_lo)].get();
          mpfr_set_zero(gc, 1);
          if (auto p = val(real, s, a, c - 1)) mpfr_set(gc, p, MPFR_RNDN);
          if (auto p = val(real, s, a, c)) mpfr_sub(gc, gc, p, MPFR_RNDN);
          mpfr_mul(gc, gc, inv[static_cast<std::size_t>(c - r.n2_lo)].get(), MPFR_RNDN);
        }
        for (int c = r.n2_lo; c <= r.n2_hi; ++c) {
          const std::size_t k = static_cast<std::size_t>(c - r.n2_lo);
          mpfr_mul(t.get(), g[k + 1].get(), qk.get(), MPFR_RNDN);
          mpfr_sub(t.get(), g[k].get(), t.get(), MPFR_RNDN);
          mpfr_mul(t.get(), t.get(), inv[k].get(), MPFR_RNDN);
          const std::size_t i = out.index(s, a, c);
          mpfr_ptr dst = real ? out.re(i).get() : out.im(i).get();
          if (add)
            mpfr_add(dst, dst, t.get(), MPFR_RNDN);
          else
            mpfr_set(dst, t.get(), MPFR_RNDN);
        }
      }
}

LatticeWindow with_taint(const LatticeWindow& w, int d1, int d2) {
  LatticeWindow o = w;
  o.taint1 += d1;
  o.taint2 += d2;
  return o;
}

}  // namespace

Grid dx(const Grid& f, const std::optional<Region>& region) {
  Grid out(f.params(), with_taint(f.window(), 1, 0), f.parity(), f.bits());
  dx_into(f, out, clip(region.value_or(full(f.window())), f.window()));
  return out;
}

Grid bessel(const Grid& f, const std::optional<Region>& region) {
  if (f.parity() != Parity::even) throw InvalidParams("hp::bessel: input must be even in x2");
  Grid out(f.params(), with_taint(f.window(), 0, 2), f.parity(), f.bits());
  bessel_into(f, out, clip(region.value_or(full(f.window())), f.window()), false);
  return out;
}

Grid delta(const Grid& f, const std::optional<Region>& region) {
  if (f.parity() != Parity::even) throw InvalidParams("hp::delta: input must be even in x2");
  const Region r = clip(region.value_or(full(f.window())), f.window());
  Grid tmp(f.params(), f.window(), f.parity(), f.bits());
  dx_into(f, tmp, clip(Region{r.n1_lo - 1, r.n1_hi + 1, r.n2_lo, r.n2_hi}, f.window()));
  Grid out(f.params(), with_taint(f.window(), 2, 2), f.parity(), f.bits());
  dx_into(tmp, out, r);
  bessel_into(f, out, r, true);
  return out;
}

double log_norm_sq(const Grid& f, const Region& region) {
  const Region r = clip(region, f.window());
  const QParams& p = f.params();
  const double lq = std::log(p.q);
  const long bits = 128;
  mp::Real acc(bits), t(bits), u(bits), w(bits);
  for (int s : {1, -1})
    for (int a = r.n1_lo; a <= r.n1_hi; ++a)
      for (int b = r.n2_lo; b <= r.n2_hi; ++b) {
        const std::size_t i = f.index(s, a, b);
        mpfr_sqr(t.get(), f.re(i).get(), MPFR_RNDN);
        mpfr_sqr(u.get(), f.im(i).get(), MPFR_RNDN);
        mpfr_add(t.get(), t.get(), u.get(), MPFR_RNDN);
        if (mpfr_zero_p(t.get())) continue;
        mpfr_set_d(w.get(), 2.0 * std::log1p(-p.q) + (a + (2.0 * p.alpha + 2.0) * b) * lq, MPFR_RNDN);
        mpfr_exp(w.get(), w.get(), MPFR_RNDN);
        mpfr_mul(t.get(), t.get(), w.get(), MPFR_RNDN);
        mpfr_add(acc.get(), acc.get(), t.get(), MPFR_RNDN);
      }
  if (mpfr_zero_p(acc.get())) return -std::numeric_limits<double>::infinity();
  return acc.log2_abs() * std::log(2.0);
}

Grid forward_hp(const GridFunction& f, const LatticeWindow& lw, long bits) {
  if (f.parity() != Parity::even) throw InvalidParams("forward_hp: input must be even in x2");
  const QParams& p = f.params();
  Grid F(p, lw.clean(), Parity::even, bits);
  const auto box = support_box(f);
  if (!box) return F;
  const auto [b_lo, b_hi, d_lo, d_hi] = *box;
  const double q = p.q;
  const int kmin = std::min(lw.n1_min + b_lo, lw.n2_min + d_lo);
  const int kmax = std::max(lw.n1_max + b_hi, lw.n2_max + d_hi);
  const KernelTableMP& tab = kernel_table_mp(p, bits, kmin, kmax);

  const int nb = b_hi - b_lo + 1, nc = lw.size2();
  auto hi_ = [&](int s, int b, int c) {
    return (static_cast<std::size_t>(s > 0 ? 0 : 1) * nb + static_cast<std::size_t>(b - b_lo)) * nc +
           static_cast<std::size_t>(c - lw.n2_min);
  };
  // H(s, b, c) = (1-q) q^b sum_d (1-q) q^{(2a+2)d} f(s,b,d) j(q^{c+d})
  std::vector<mp::Real> Hr, Hi;
  Hr.reserve(static_cast<std::size_t>(2 * nb * nc));
  Hi.reserve(static_cast<std::size_t>(2 * nb * nc));
  for (int i = 0; i < 2 * nb * nc; ++i) {
    Hr.emplace_back(bits);
    Hi.emplace_back(bits);
  }
  mp::Real oneq = mp::one_minus(q, bits), t(bits), w(bits);
  std::vector<mp::Real> w2;
  for (int d = d_lo; d <= d_hi; ++d) {
    mp::Real v = mp::pow_real(q, (2.0 * p.alpha + 2.0) * d, bits);
    mpfr_mul(v.get(), v.get(), oneq.get(), MPFR_RNDN);
    w2.push_back(std::move(v));
  }
  for (int s : {1, -1})
    for (int b = b_lo; b <= b_hi; ++b) {
      mp::Real w1 = mp::pow_int(q, b, bits);
      mpfr_mul(w1.get(), w1.get(), oneq.get(), MPFR_RNDN);
      for (int c = lw.n2_min; c <= lw.n2_max; ++c) {
        mpfr_ptr hr = Hr[hi_(s, b, c)].get();
        mpfr_ptr hi = Hi[hi_(s, b, c)].get();
        for (int d = d_lo; d <= d_hi; ++d) {
          const cplx v = f.at(s, b, d);
          if (v == cplx(0.0, 0.0)) continue;
          mpfr_mul(w.get(), w2[static_cast<std::size_t>(d - d_lo)].get(), tab.j(c + d).get(), MPFR_RNDN);
          mpfr_mul_d(t.get(), w.get(), v.real(), MPFR_RNDN);
          mpfr_add(hr, hr, t.get(), MPFR_RNDN);
          mpfr_mul_d(t.get(), w.get(), v.imag(), MPFR_RNDN);
          mpfr_add(hi, hi, t.get(), MPFR_RNDN);
        }
        mpfr_mul(hr, hr, w1.get(), MPFR_RNDN);
        mpfr_mul(hi, hi, w1.get(), MPFR_RNDN);
      }
    }

  // (C - i sigma S)(Hr + i Hi) = C Hr + sigma S Hi + i (C Hi - sigma S Hr), sigma = t s
  const double K = normalization_K(p);
  for (int tt : {1, -1})
    for (int a = lw.n1_min; a <= lw.n1_max; ++a)
      for (int c = lw.n2_min; c <= lw.n2_max; ++c) {
        const std::size_t o = F.index(tt, a, c);
        mpfr_ptr fr = F.re(o).get();
        mpfr_ptr fi = F.im(o).get();
        for (int s : {1, -1})
          for (int b = b_lo; b <= b_hi; ++b) {
            const std::size_t h = hi_(s, b, c);
            if (mpfr_zero_p(Hr[h].get()) && mpfr_zero_p(Hi[h].get())) continue;
            const mp::Real& C = tab.cos(a + b);
            const mp::Real& S = tab.sin(a + b);
            const bool neg = tt * s < 0;
            mpfr_mul(t.get(), C.get(), Hr[h].get(), MPFR_RNDN);
            mpfr_add(fr, fr, t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), S.get(), Hi[h].get(), MPFR_RNDN);
            neg ? mpfr_sub(fr, fr, t.get(), MPFR_RNDN) : mpfr_add(fr, fr, t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), C.get(), Hi[h].get(), MPFR_RNDN);
            mpfr_add(fi, fi, t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), S.get(), Hr[h].get(), MPFR_RNDN);
            neg ? mpfr_add(fi, fi, t.get(), MPFR_RNDN) : mpfr_sub(fi, fi, t.get(), MPFR_RNDN);
          }
        mpfr_mul_d(fr, fr, K, MPFR_RNDN);
        mpfr_mul_d(fi, fi, K, MPFR_RNDN);
      }
  return F;
}

}  // namespace qw::hp
