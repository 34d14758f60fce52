// SPDX-License-Identifier: Apache-2.0
// Real Paley-Wiener estimates on the q-lattice.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qw/qweinstein.hpp"

namespace qw {

/// Largest |x| = sqrt(x1^2 + x2^2) over samples with |f| > zero_tol; 0 for
/// empty support.  A negative zero_tol means 1e-12 * max|f|.
double support_radius(const GridFunction& f, double zero_tol = -1.0);

/// log b_n for n = 1..N, b_n = || |x|^{2n} f ||_2^{1/(2n)}.  Entries are
/// -inf for f = 0.
std::vector<double> log_norm_growth(const GridFunction& f, int N);
/// b_n themselves.
std::vector<double> norm_growth_sequence(const GridFunction& f, int N);

/// Least-squares fit of log a_n = log r + (1/n) log c over the last half
/// of the sequence (entries are a_1..a_N); returns r.
double extrapolate_radius(const std::vector<double>& a);

struct BandwidthOptions {
  bool literal = true;                      // also iterate Delta on the samples
  long literal_bits = 0;                    // 0: plan from the amplification bound
  std::optional<LatticeWindow> x_window;    // preimage window; default mirrors the lambda window
  double zero_tol_rel = 1e-12;              // support detection in the preimage
  int core_margin = 24;                     // near-origin layers kept beyond the support scale
  double route_tol = 1e-6;
};

struct BandwidthReport {
  std::vector<double> a_seq;       // literal ||Delta^n F||^{1/(2n)}, empty when not computed
  std::vector<double> a_spectral;  // || |t|^{2n} F^{-1}F ||^{1/(2n)}
  double estimate = 0.0;           // fitted limit of a_seq (a_spectral when literal is off)
  double estimate_spectral = 0.0;
  double oracle_radius = 0.0;      // support radius of the preimage
  int n_used = 0;
  long bits_used = 0;
  double route_disagreement = 0.0; // max relative difference of the two sequences
  bool routes_agree = true;
  // Which reading of the limit the data supports: "radius" (sup |x|) or "radius^2" (sup |x|^2).
  std::string reading;
  double rel_err_radius = 0.0;
  double rel_err_radius_sq = 0.0;
  std::string diagnostic;
};

/// a_n two ways.  The literal route re-evaluates F at working precision
/// from its preimage on the lambda lattice and applies Delta n times;
/// samples rounded to double cannot survive 2n divided differences.
BandwidthReport bandwidth_estimate(const GridFunction& F, int N, const BandwidthOptions& opt = {});

struct PWmParams {
  int m = 2;
  double a = 1.0;
  int N = 10;
  void validate(double alpha) const;
};

/// B_{n,m,q} = ((1-q)^{2m} / (q^{2n};q^{-1})_{2m})^2
double pw_B(int n, int m, double q);

struct PWmReport {
  std::vector<int> n;               // m..N
  std::vector<double> log_value;    // log sup_x a^{-2n} B (1+|x|^2)^m |Delta^n F(x)|
  std::vector<double> running_sup;  // max over n' <= n of the values (not logged)
  std::vector<double> log_bound;    // log of the constructive bound at each n (empty without a preimage)
  double sup = 0.0;
  long bits_used = 0;
};

/// The PW^m seminorm sup.  Delta^n F is evaluated as in the literal route
/// of bandwidth_estimate; the constructive bound is attached for each n.
PWmReport pw_m_sup(const GridFunction& F, const PWmParams& prm, const BandwidthOptions& opt = {});

// ---------------------------------------------------------------------------
// Constructive sup-norm bounds.

struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;   // the C of the bound
  double support = 0.0;    // radius of the support of the differentiated function
  bool ok() const { return lhs <= rhs; }
};

/// C(R,p) = max_{p1,p2<=p} 2^{p1+p2} q^{-p1^2-p2^2}
///            sum_{j1<=p1, j2<=p2} C(p1,j1) C(p2,j2) (q^{-p1}R)^{-j1} (q^{-p2}R)^{-j2} ||D^{(p1-j1,p2-j2)} f||_inf
///
/// from the one-variable Leibniz rules: each derivative of z^n g splits into
/// a term with z^n and a term with [n]_q z^{n-1}, with dilations by at most q^{-1}.
double monomial_constant(const GridFunction& f, double R, int p);

/// lhs = ||D^{(p1,p2)}(t1^{n1} t2^{n2} f)||_inf,
/// rhs = C(R,p) (R/q^{2p})^{n1+n2} [n1]^{(p)} [n2]^{(p)} with [n]^{(p)} = prod_{l<p} [n-l]_q.
/// Requires p1, p2 <= p < n1, n2.
BoundCheck monomial_derivative_bound_check(const GridFunction& f, int n1, int n2, int p1, int p2, int p);

/// lhs = ||D^{(2i,2j)}(|t|^{2n} f)||_inf,
/// rhs = 2^n C(R,2p) (R/q^{4p})^{2n} ([2n]^{(2p)})^2.  Requires i, j <= p <= n.
/// The 2^n comes from expanding |t|^{2n} binomially.
BoundCheck corollary_bound_check(const GridFunction& f, int n, int i, int j, int p);

/// C_k = (1 + q^{2a+1} + |[2a+1]_q|)^k.  Delta = d_1^2 + q^{2a+1} d_2^2 + [2a+1]_q d_2/y and
/// d_2 f(y)/y = int_0^1 d_2^2 f(yt) d_qt, an average with norm at most 1.
double weinstein_constant(int k, const QParams& p);

/// lhs = ||Delta^k f||_inf, rhs = C_k max_{p1,p2<=k} ||D^{(2p1,2p2)} f||_inf.
BoundCheck weinstein_sup_bound_check(const GridFunction& f, int k);

/// log of the bound on sup_x a^{-2n} B_{n,m,q} (1+|x|^2)^m |Delta^n F f(x)| for
/// F = forward(f):
///   4K/(q;q)^2 mu(S_m) sum_k C(m,k) C_k 2^n C(R,2m) (R/(a q^{4m}))^{2n} B_{n,m,q} ([2n]^{(2m)})^2
/// where S_m is the support box of f grown by 2m layers.  With a = R/q^{4m}
/// the last three factors cancel to 1.
double log_pw_m_bound(const GridFunction& f, int m, double a, int n);

/// max over y of |j_{a+p}(y) - c int_0^1 W_{p-1}(t) j_a(yt) t^{2a+1} d_qt|,
/// c = (1+q) Gamma_{q^2}(a+p+1) / (Gamma_{q^2}(a+1) Gamma_{q^2}(p)).
double sonine_identity_check(double alpha, int p, const std::vector<double>& ys, double q,
                             const TruncationPolicy& pol = {});

}  // namespace qw
