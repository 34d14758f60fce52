// SPDX-License-Identifier: Apache-2.0
#include "qw/qintegrate.hpp"

#include <algorithm>
#include <cmath>

namespace qw {

cplx sum_ascending(std::vector<cplx> terms) {
  // Zeros are dropped and ties keep input order, so padding a window with
  // zeros leaves the result bitwise unchanged.
  std::erase_if(terms, [](const cplx& t) { return t == cplx(0.0, 0.0); });
  std::stable_sort(terms.begin(), terms.end(), [](const cplx& a, const cplx& b) { return std::abs(a) < std::abs(b); });
  NeumaierC acc;
  for (const auto& t : terms) acc.add(t);
  return acc.value();
}

double sum_ascending(std::vector<double> terms) {
  std::erase_if(terms, [](double t) { return t == 0.0; });
  std::stable_sort(terms.begin(), terms.end(), [](double a, double b) { return std::fabs(a) < std::fabs(b); });
  Neumaier acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

double Measure::line_weight(int n) const { return (1.0 - params.q) * std::pow(params.q, n); }

double Measure::log_weight(int n1, int n2) const {
  const double lq = std::log(params.q);
  return 2.0 * std::log1p(-params.q) + (n1 + (2.0 * params.alpha + 2.0) * n2) * lq;
}

double Measure::weight(int n1, int n2) const { return std::exp(log_weight(n1, n2)); }

namespace {

// Tail of a geometric continuation from the last kept term.
double geometric_tail(double last, double ratio) {
  if (!(ratio < 1.0)) return std::numeric_limits<double>::infinity();
  return last * ratio / (1.0 - ratio);
}

}  // namespace

IntegralResult jackson_0_to_a(const std::function<cplx(double)>& f, double a, const QParams& p,
                              const TruncationPolicy& pol) {
  p.validate();
  pol.validate();
  if (!(a > 0.0)) throw InvalidParams("jackson_0_to_a: a must be positive");
  const double q = p.q;
  const int count = pol.n_max - pol.n_min + 1;
  std::vector<cplx> terms;
  terms.reserve(static_cast<std::size_t>(count));
  double qn = 1.0;
  for (int n = 0; n < count; ++n) {
    terms.push_back((1.0 - q) * a * qn * f(a * qn));
    qn *= q;
  }
  IntegralResult r;
  const double last = std::abs(terms.back());
  const double prev = terms.size() > 1 ? std::abs(terms[terms.size() - 2]) : 0.0;
  // Near the origin f is bounded, so the terms decay at least like q^n.
  const double ratio = prev > 0.0 ? std::min(std::max(last / prev, q), 1.0) : q;
  r.value = sum_ascending(std::move(terms));
  r.tail = last == 0.0 ? 0.0 : geometric_tail(last, ratio);
  r.converged = r.tail <= std::max(pol.series_tol, 1e-13 * std::abs(r.value));
  return r;
}

IntegralResult jackson_0_to_inf(const std::function<cplx(double)>& f, const QParams& p, const TruncationPolicy& pol) {
  p.validate();
  pol.validate();
  const double q = p.q;
  std::vector<cplx> terms;
  for (int n = pol.n_min; n <= pol.n_max; ++n) {
    const double x = std::pow(q, n);
    terms.push_back((1.0 - q) * x * f(x));
  }
  IntegralResult r;
  const double lo = std::abs(terms.front()), hi = std::abs(terms.back());
  r.value = sum_ascending(std::move(terms));
  r.tail = hi * q / (1.0 - q) + lo;
  r.converged = r.tail <= std::max(pol.series_tol, 1e-13 * std::abs(r.value));
  return r;
}

IntegralResult jackson_signed_line(const std::function<cplx(double)>& f, const QParams& p, const TruncationPolicy& pol) {
  p.validate();
  pol.validate();
  const double q = p.q;
  std::vector<cplx> terms;
  for (int n = pol.n_min; n <= pol.n_max; ++n) {
    const double x = std::pow(q, n);
    terms.push_back((1.0 - q) * x * (f(x) + f(-x)));
  }
  IntegralResult r;
  const double lo = std::abs(terms.front()), hi = std::abs(terms.back());
  r.value = sum_ascending(std::move(terms));
  r.tail = hi * q / (1.0 - q) + lo;
  r.converged = r.tail <= std::max(pol.series_tol, 1e-13 * std::abs(r.value));
  return r;
}

IntegralResult jackson_signed_line(const LineFunction& f) {
  const double q = f.params.q;
  std::vector<cplx> terms;
  for (int n = f.n_min; n <= f.n_max; ++n) terms.push_back((1.0 - q) * std::pow(q, n) * (f(1, n) + f(-1, n)));
  IntegralResult r;
  r.value = sum_ascending(std::move(terms));
  return r;
}

IntegralResult integrate_mu(const GridFunction& f, double tail_tol) {
  if (f.parity() != Parity::even) throw InvalidParams("integrate_mu: input must be even in x2");
  const auto& w = f.window();
  const auto& p = f.params();
  const Measure mu{p, MeasureKind::weighted_2d};
  std::vector<cplx> terms;
  terms.reserve(w.points());
  std::vector<double> row1(static_cast<std::size_t>(w.size1()), 0.0), row2(static_cast<std::size_t>(w.size2()), 0.0);
  f.for_each([&](int s, int a, int b) {
    const cplx t = mu.weight(a, b) * f.at(s, a, b);
    terms.push_back(t);
    row1[static_cast<std::size_t>(a - w.n1_min)] += std::abs(t);
    row2[static_cast<std::size_t>(b - w.n2_min)] += std::abs(t);
  });
  IntegralResult r;
  r.value = sum_ascending(std::move(terms));

  // Near the origin the weights shrink by q (in x1) and q^{2a+2} (in x2)
  // per layer; far out the decay rate is read off the last two layers.
  double tail = 0.0;
  tail += geometric_tail(row1.back(), p.q);
  tail += geometric_tail(row2.back(), std::pow(p.q, 2.0 * p.alpha + 2.0));
  auto far = [](const std::vector<double>& row) {
    if (row.front() == 0.0) return 0.0;
    if (row.size() < 2 || row[1] == 0.0) return std::numeric_limits<double>::infinity();
    return geometric_tail(row.front(), row.front() / row[1]) + row.front();
  };
  tail += far(row1) + far(row2);
  r.tail = tail;
  r.converged = tail <= tail_tol * std::max(std::abs(r.value), std::numeric_limits<double>::min());
  if (tail == 0.0) r.converged = true;
  return r;
}

double lp_norm(const GridFunction& f, double p) {
  if (std::isinf(p)) return f.max_abs();
  if (!(p >= 1.0)) throw InvalidParams("lp_norm: p must be >= 1");
  const Measure mu{f.params(), MeasureKind::weighted_2d};
  std::vector<double> terms;
  terms.reserve(f.window().points());
  f.for_each([&](int s, int a, int b) {
    const double v = std::abs(f.at(s, a, b));
    if (v > 0.0) terms.push_back(std::exp(mu.log_weight(a, b) + p * std::log(v)));
  });
  return std::pow(sum_ascending(std::move(terms)), 1.0 / p);
}

cplx integrate_product(const GridFunction& f, const GridFunction& g) {
  if (!(f.window().clean() == g.window().clean())) throw InvalidParams("integrate_product: window mismatch");
  const Measure mu{f.params(), MeasureKind::weighted_2d};
  std::vector<cplx> terms;
  terms.reserve(f.window().points());
  f.for_each([&](int s, int a, int b) { terms.push_back(mu.weight(a, b) * f.at(s, a, b) * g.at(s, a, b)); });
  return sum_ascending(std::move(terms));
}

double l2_norm_sq_untainted(const GridFunction& f) {
  const Measure mu{f.params(), MeasureKind::weighted_2d};
  const auto& w = f.window();
  std::vector<double> terms;
  f.for_each([&](int s, int a, int b) {
    if (!w.untainted(a, b)) return;
    const double v = std::abs(f.at(s, a, b));
    if (v > 0.0) terms.push_back(std::exp(mu.log_weight(a, b) + 2.0 * std::log(v)));
  });
  return sum_ascending(std::move(terms));
}

}  // namespace qw
