// SPDX-License-Identifier: Apache-2.0
#include "qw/kernel_table.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <tuple>
#include <utility>

namespace qw {

KernelTable::KernelTable(const QParams& p) : params_(p) { p.validate(); }

void KernelTable::compute(int k, double& c, double& s, double& j) const {
  const double q = params_.q;
  const double x = std::pow(q, k);
  auto hard = [&](double a) { return mp::bessel_log2_max_term(a, x, q) >= 6.0; };
  auto eval = [&](double a) {
    return hard(a) ? mp::bessel_j_lattice(a, k, q, 60).to_double() : mp::bessel_j_real(a, x, q);
  };
  c = eval(-0.5);
  double j12 = 0.0;
  if (hard(0.5)) {
    // Form x j_{1/2}(x) before rounding; j_{1/2} alone may underflow.
    mp::Real jj = mp::bessel_j_lattice(0.5, k, q, 80);
    j12 = jj.to_double();
    mp::Real xx = mp::pow_int(q, k, 80);
    mpfr_mul(jj.get(), jj.get(), xx.get(), MPFR_RNDN);
    s = jj.to_double();
  } else {
    j12 = mp::bessel_j_real(0.5, x, q);
    s = x * j12;
  }
  const double a = params_.alpha;
  j = a == -0.5 ? c : a == 0.5 ? j12 : eval(a);
}

void KernelTable::ensure(int kmin, int kmax) {
  if (kmin > kmax) return;
  if (kmax_ < kmin_) {
    kmin_ = kmin;
    kmax_ = kmin - 1;
  }
  const int nmin = std::min(kmin, kmin_), nmax = std::max(kmax, kmax_);
  if (nmin == kmin_ && nmax == kmax_) return;
  const std::size_t n = static_cast<std::size_t>(nmax - nmin + 1);
  std::vector<double> c(n), s(n), j(n);
  for (int k = nmin; k <= nmax; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - nmin);
    if (k >= kmin_ && k <= kmax_) {
      c[i] = c_[idx(k)];
      s[i] = s_[idx(k)];
      j[i] = j_[idx(k)];
    } else {
      compute(k, c[i], s[i], j[i]);
    }
  }
  c_ = std::move(c);
  s_ = std::move(s);
  j_ = std::move(j);
  kmin_ = nmin;
  kmax_ = nmax;
}

KernelTable& kernel_table(const QParams& p, int kmin, int kmax) {
  static std::map<std::pair<double, double>, std::unique_ptr<KernelTable>> cache;
  auto& slot = cache[{p.q, p.alpha}];
  if (!slot) slot = std::make_unique<KernelTable>(p);
  slot->ensure(kmin, kmax);
  return *slot;
}

KernelTableMP::KernelTableMP(const QParams& p, long bits, int kmin, int kmax)
    : params_(p), bits_(bits), kmin_(kmin), kmax_(kmin - 1) {
  p.validate();
  ensure(kmin, kmax);
}

void KernelTableMP::compute(int k, mp::Real& c, mp::Real& s, mp::Real& j) const {
  const double q = params_.q;
  c = mp::bessel_j_lattice(-0.5, k, q, bits_);
  mp::Real sj = mp::bessel_j_lattice(0.5, k, q, bits_ + 8);
  mp::Real x = mp::pow_int(q, k, bits_ + 8);
  s = mp::Real(bits_);
  mpfr_mul(s.get(), sj.get(), x.get(), MPFR_RNDN);
  if (params_.alpha == -0.5) {
    j = c;
  } else if (params_.alpha == 0.5) {
    j = mp::Real(bits_);
    mpfr_set(j.get(), sj.get(), MPFR_RNDN);
  } else {
    j = mp::bessel_j_lattice(params_.alpha, k, q, bits_);
  }
}

void KernelTableMP::ensure(int kmin, int kmax) {
  if (kmin > kmax) return;
  if (kmax_ < kmin_) {
    kmin_ = kmin;
    kmax_ = kmin - 1;
  }
  const int nmin = std::min(kmin, kmin_), nmax = std::max(kmax, kmax_);
  if (nmin == kmin_ && nmax == kmax_) return;
  const std::size_t n = static_cast<std::size_t>(nmax - nmin + 1);
  std::vector<mp::Real> c, s, j;
  c.reserve(n);
  s.reserve(n);
  j.reserve(n);
  for (int k = nmin; k <= nmax; ++k) {
    if (k >= kmin_ && k <= kmax_) {
      const std::size_t i = static_cast<std::size_t>(k - kmin_);
      c.push_back(std::move(c_[i]));
      s.push_back(std::move(s_[i]));
      j.push_back(std::move(j_[i]));
    } else {
      c.emplace_back(bits_);
      s.emplace_back(bits_);
      j.emplace_back(bits_);
      compute(k, c.back(), s.back(), j.back());
    }
  }
  c_ = std::move(c);
  s_ = std::move(s);
  j_ = std::move(j);
  kmin_ = nmin;
  kmax_ = nmax;
}

const KernelTableMP& kernel_table_mp(const QParams& p, long bits, int kmin, int kmax) {
  static std::map<std::tuple<double, double, long>, std::unique_ptr<KernelTableMP>> cache;
  auto& slot = cache[{p.q, p.alpha, bits}];
  if (!slot) slot = std::make_unique<KernelTableMP>(p, bits, kmin, kmax);
  slot->ensure(kmin, kmax);
  return *slot;
}

}  // namespace qw
