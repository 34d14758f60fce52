// SPDX-License-Identifier: Apache-2.0
// qweinstein: transform, bandwidth, verify and gen subcommands.
//
// Exit codes: 0 ok, 1 usage or parse error, 2 numerical diagnostic,
// 3 verification failure.
#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>

#include "qw/corpus.hpp"
#include "qw/gridio.hpp"
#include "qw/paleywiener.hpp"
#include "qw/qweinstein.hpp"

using namespace qw;

namespace {

enum Exit { ok = 0, usage = 1, numerical = 2, failed = 3 };

struct Usage : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config, window, out, format = "csv";
  std::optional<double> q, alpha, tol;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "key=value job file; flags override it");
  app->add_option("--q", c.q, "base q in (0,1)");
  app->add_option("--alpha", c.alpha, "order alpha >= -1/2");
  app->add_option("--window", c.window, "x window n1_min,n1_max,n2_min,n2_max");
  app->add_option("--tol", c.tol, "tolerance (meaning depends on the command)");
  app->add_option("--seed", c.seed, "seed for generated functions");
  app->add_option("--out", c.out, "output file (default: standard output)");
  app->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

io::JobConfig resolve(const Common& c) {
  io::JobConfig j;
  if (!c.config.empty()) j = io::read_config_file(c.config);
  if (c.q || c.alpha) j.params = QParams(c.q.value_or(j.params.q), c.alpha.value_or(j.params.alpha));
  if (!c.window.empty()) j.window = io::parse_window(c.window);
  if (c.seed) j.seed = *c.seed;
  return j;
}

double tol_or(const Common& c, const io::JobConfig& j, const char* key, double fallback) {
  if (c.tol) return *c.tol;
  if (auto it = j.options.find(key); it != j.options.end()) return std::stod(it->second);
  if (auto it = j.options.find("tol"); it != j.options.end()) return std::stod(it->second);
  return fallback;
}

GridFunction load(const std::string& path) {
  try {
    return io::read_grid_file(path);
  } catch (const io::ParseError& e) {
    throw Usage(path + ": " + e.what());
  }
}

void emit_grid(const Common& c, const GridFunction& f) {
  const io::Format fmt = io::parse_format(c.format);
  if (c.out.empty()) {
    io::write_grid(std::cout, f, fmt);
  } else {
    io::write_grid_file(c.out, f, fmt);
  }
}

// ------------------------------------------------------------------ transform

struct TransformArgs {
  std::string input, direction = "forward", out_window, check;
};

int cmd_transform(const Common& c, const TransformArgs& a) {
  const io::JobConfig j = resolve(c);
  const GridFunction f = load(a.input);
  if (f.parity() != Parity::even) throw Usage(a.input + ": only even functions can be transformed");
  const double target = tol_or(c, j, "tail_tol", 1e-13);

  TransformResult r;
  if (a.direction == "forward") {
    const LatticeWindow lw = a.out_window.empty() ? choose_lambda_window(f, target).window : io::parse_window(a.out_window);
    r = forward(f, lw, j.policy);
  } else {
    r = inverse(f, a.out_window.empty() ? j.window : io::parse_window(a.out_window), j.policy);
    // The output is not expected to decay at its window edge; what the
    // reconstruction misses is the input's tail.
    r.tail_bound = spectral_tail(f);
    r.converged = r.tail_bound <= 1e-8;
    r.diagnostic = r.converged ? "" : "input window tail above 1e-8";
  }
  if (!r.grid.all_finite()) throw DivergenceError(r.diagnostic);
  fmt::print(std::cerr, "tail bound: {:.3e}\n", r.tail_bound);
  if (!r.converged) fmt::print(std::cerr, "warning: {}\n", r.diagnostic);
  emit_grid(c, r.grid);

  if (!a.check.empty()) {
    const GridFunction ref = load(a.check);
    const double scale = lp_norm(ref, 2.0);
    const double diff = lp_norm(r.grid - ref.resized(r.grid.window()), 2.0);
    const double rel = scale > 0.0 ? diff / scale : diff;
    const double tol = c.tol.value_or(1e-6);
    fmt::print(std::cerr, "relative L2 difference from {}: {:.3e} (tol {:.1e})\n", a.check, rel, tol);
    if (!(rel <= tol)) return failed;
  }
  return ok;
}

// ------------------------------------------------------------------ bandwidth

struct BandwidthArgs {
  std::string input;
  int N = 20;
  bool no_literal = false;
  std::optional<double> expect;
};

int cmd_bandwidth(const Common& c, const BandwidthArgs& a) {
  if (a.N < 1) throw Usage("N must be at least 1");
  const GridFunction F = load(a.input);
  BandwidthOptions opt;
  opt.literal = !a.no_literal;
  const BandwidthReport r = bandwidth_estimate(F, a.N, opt);

  fmt::print("estimate           {:.10g}\n", r.estimate);
  fmt::print("estimate_spectral  {:.10g}\n", r.estimate_spectral);
  fmt::print("oracle_radius      {:.10g}\n", r.oracle_radius);
  fmt::print("n_used             {}\n", r.n_used);
  fmt::print("bits_used          {}\n", r.bits_used);
  fmt::print("route_disagreement {:.3e}\n", r.route_disagreement);
  fmt::print("routes_agree       {}\n", r.routes_agree);
  fmt::print("reading            {}\n", r.reading.empty() ? "-" : r.reading);
  if (!r.diagnostic.empty()) fmt::print("diagnostic         {}\n", r.diagnostic);

  if (!c.out.empty()) {
    std::ofstream os(c.out);
    if (!os) throw Usage("cannot write '" + c.out + "'");
    const auto lit = [&](std::size_t i) { return i < r.a_seq.size() ? fmt::format("{:.17g}", r.a_seq[i]) : std::string(); };
    if (c.format == "json") {
      os << "[";
      for (std::size_t i = 0; i < r.a_spectral.size(); ++i)
        fmt::print(os, "{}{{\"n\": {}, \"a_n_literal\": {}, \"a_n_spectral\": {:.17g}}}", i ? ",\n " : "", i + 1,
                   i < r.a_seq.size() ? lit(i) : "null", r.a_spectral[i]);
      os << "]\n";
    } else {
      os << "n,a_n_literal,a_n_spectral\n";
      for (std::size_t i = 0; i < r.a_spectral.size(); ++i) fmt::print(os, "{},{},{:.17g}\n", i + 1, lit(i), r.a_spectral[i]);
    }
  }

  if (a.expect) {
    const double tol = c.tol.value_or(0.02);
    const double err = *a.expect == 0.0 ? r.estimate : std::fabs(r.estimate - *a.expect) / *a.expect;
    fmt::print("expected           {:.10g} (relative error {:.3e}, tol {:.1e})\n", *a.expect, err, tol);
    if (!(err <= tol)) return failed;
  }
  return r.routes_agree ? ok : failed;
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
  std::string suite, lambda_window;
  int count = 5;
};

struct Tally {
  bool pass = true;
  void line(const std::string& name, double value, double tol) {
    const bool good = value <= tol;
    pass = pass && good;
    fmt::print("{:<5} {:<40} {:.3e} (tol {:.1e})\n", good ? "ok" : "FAIL", name, value, tol);
  }
};

LatticeWindow support_of(const io::JobConfig& j) {
  if (auto it = j.options.find("support"); it != j.options.end()) return io::parse_window(it->second);
  return j.window;
}

int suite_plancherel(const Common& c, const io::JobConfig& j, const VerifyArgs& a) {
  const double tol = tol_or(c, j, "plancherel_tol", 1e-6);
  Tally t;
  double worst_tail = 0.0;
  for (int i = 0; i < a.count; ++i) {
    const GridFunction f = random_even_function(j.params, j.window, support_of(j), j.seed + static_cast<std::uint64_t>(i));
    const LatticeWindow lw =
        a.lambda_window.empty() ? choose_lambda_window(f, 1e-13).window : io::parse_window(a.lambda_window);
    const TransformResult F = forward(f, lw, j.policy);
    if (!F.grid.all_finite()) throw DivergenceError(F.diagnostic);
    worst_tail = std::max(worst_tail, F.tail_bound);
    const double nf = lp_norm(f, 2.0);
    t.line(fmt::format("plancherel |ratio-1| (seed {})", j.seed + static_cast<std::uint64_t>(i)),
           std::fabs(lp_norm(F.grid, 2.0) / nf - 1.0), tol);
    t.line(fmt::format("inversion rel L2 (seed {})", j.seed + static_cast<std::uint64_t>(i)),
           lp_norm(inverse(F.grid, j.window, j.policy).grid - f, 2.0) / nf, tol);
  }
  fmt::print("largest window tail bound: {:.3e}\n", worst_tail);
  if (!t.pass && worst_tail > tol) fmt::print("diagnostic: the lambda window misses {:.3e} of the L2 mass\n", worst_tail);
  return t.pass ? ok : failed;
}

int suite_identities(const Common& c, const io::JobConfig& j, const VerifyArgs& a) {
  const double tol = tol_or(c, j, "identities_tol", 1e-7);
  Tally t;
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t s = j.seed + static_cast<std::uint64_t>(i);
    const GridFunction f = random_even_function(j.params, j.window, support_of(j), s);
    const GridFunction g = random_even_function(j.params, j.window, support_of(j), s + 1000);
    const LatticeWindow lw =
        a.lambda_window.empty() ? choose_lambda_window(f, 1e-13).window : io::parse_window(a.lambda_window);
    const IdentityReport r = identity_suite(f, g, lw, 2);
    for (int n = 0; n <= 2; ++n)
      for (int p = 0; p <= 2; ++p) {
        t.line(fmt::format("(a) n={} p={} (seed {})", n, p, s), r.a[n][p], tol);
        t.line(fmt::format("(b) n={} p={} (seed {})", n, p, s), r.b[n][p], tol);
      }
    t.line(fmt::format("(c) (seed {})", s), r.c, tol);
    t.line(fmt::format("(d) (seed {})", s), r.d, tol);
  }
  return t.pass ? ok : failed;
}

int suite_orthogonality(const Common& c, const io::JobConfig& j) {
  const double tol = tol_or(c, j, "orthogonality_tol", 1e-3);
  Tally t;
  const std::vector<std::pair<LatticePoint, LatticePoint>> pts{{{1, 0}, {1, 0}}, {{-1, 2}, {1, 1}}, {{1, -1}, {1, 3}}};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto r = orthogonality_check(pts[i].first, pts[i].second, pts[k].first, pts[k].second, j.params);
      const double err = i == k ? std::abs(r.sum / r.predicted - 1.0) : std::abs(r.sum) / r.scale;
      t.line(fmt::format("{} pair {},{} ({} shells)", i == k ? "diagonal" : "off-diagonal", i, k, r.shells), err, tol);
    }
  return t.pass ? ok : failed;
}

int suite_sonine(const Common& c, const io::JobConfig& j) {
  const double tol = tol_or(c, j, "sonine_tol", 1e-8);
  const double q = j.params.q;
  TruncationPolicy pol = j.policy;
  pol.n_min = 0;
  pol.n_max = std::max(pol.n_max, static_cast<int>(std::ceil(std::log(1e-20) / std::log(q))));
  std::vector<double> ys;
  for (int n = -2; n <= 4; ++n) ys.push_back(std::pow(q, n));
  Tally t;
  for (int p = 1; p <= 3; ++p) t.line(fmt::format("sonine p={}", p), sonine_identity_check(j.params.alpha, p, ys, q, pol), tol);
  return t.pass ? ok : failed;
}

int suite_bounds(const io::JobConfig& j, const VerifyArgs& a) {
  Tally t;
  const LatticeWindow s = j.options.count("support") ? support_of(j) : LatticeWindow(0, 4, 0, 4);
  for (int i = 0; i < a.count; ++i) {
    const std::uint64_t seed = j.seed + static_cast<std::uint64_t>(i);
    const GridFunction f = random_bump(j.params, j.window, s, seed);
    auto add = [&](const std::string& name, const BoundCheck& b) {
      t.line(fmt::format("{} lhs/rhs (seed {})", name, seed), b.rhs > 0.0 ? b.lhs / b.rhs : b.lhs, 1.0);
    };
    add("monomial (2,2;1,1;1)", monomial_derivative_bound_check(f, 2, 2, 1, 1, 1));
    add("monomial (3,3;2,1;2)", monomial_derivative_bound_check(f, 3, 3, 2, 1, 2));
    add("|t|^2n n=1 (1,0;1)", corollary_bound_check(f, 1, 1, 0, 1));
    add("|t|^2n n=2 (1,1;1)", corollary_bound_check(f, 2, 1, 1, 1));
    add("Delta^1 sup", weinstein_sup_bound_check(f, 1));
    add("Delta^2 sup", weinstein_sup_bound_check(f, 2));
  }
  return t.pass ? ok : failed;
}

int suite_pwm(const io::JobConfig& j) {
  const int m = static_cast<int>(std::ceil(j.params.alpha + 1.5)) + 1;
  const GridFunction f = random_bump(j.params, j.window, LatticeWindow(0, 4, 0, 4), j.seed);
  const double R = support_radius(f, 0.0);
  const int N = j.options.count("N") ? std::stoi(j.options.at("N")) : 2 * m + 4;
  const PWmParams prm{m, R / std::pow(j.params.q, 4 * m), N};
  const PWmReport r = pw_m_sup(forward_auto(f).grid, prm);
  bool monotone = true;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r.n.size(); ++i) {
    const bool bounded = r.log_bound.empty() || r.log_value[i] <= r.log_bound[i];
    fmt::print("n={:<3} log value {:>10.4f}  log bound {:>10.4f}  running sup {:.4e}{}\n", r.n[i], r.log_value[i],
               r.log_bound.empty() ? std::nan("") : r.log_bound[i], r.running_sup[i], bounded ? "" : "  (above bound)");
    if (i > 0 && r.n[i - 1] >= 2 * m) {
      const double inc = r.running_sup[i] - r.running_sup[i - 1];
      monotone = monotone && inc <= prev;
      prev = inc;
    }
  }
  const bool finite = std::isfinite(r.sup) && r.sup < 1e12;
  fmt::print("{:<5} running-sup increments non-increasing from n = {}\n", monotone ? "ok" : "FAIL", 2 * m);
  fmt::print("{:<5} sup = {:.4e} < 1e12\n", finite ? "ok" : "FAIL", r.sup);
  return monotone && finite ? ok : failed;
}

int cmd_verify(const Common& c, const VerifyArgs& a) {
  if (a.count < 1) throw Usage("--count must be at least 1");
  const io::JobConfig j = resolve(c);
  if (a.suite == "plancherel") return suite_plancherel(c, j, a);
  if (a.suite == "identities") return suite_identities(c, j, a);
  if (a.suite == "orthogonality") return suite_orthogonality(c, j);
  if (a.suite == "sonine") return suite_sonine(c, j);
  if (a.suite == "bounds") return suite_bounds(j, a);
  return suite_pwm(j);
}

// ------------------------------------------------------------------ gen

struct GenArgs {
  std::string kind = "random", support, point;
  bool transform = false;
};

int cmd_gen(const Common& c, const GenArgs& a) {
  const io::JobConfig j = resolve(c);
  GridFunction f(j.params, j.window);
  const LatticeWindow s = a.support.empty() ? support_of(j) : io::parse_window(a.support);
  if (a.kind == "random") {
    f = random_even_function(j.params, j.window, s, j.seed);
  } else if (a.kind == "bump") {
    f = random_bump(j.params, j.window, s, j.seed);
  } else if (a.kind == "point") {
    int sg = 1, n1 = 0, n2 = 0;
    char tail = 0;
    if (!a.point.empty() && (std::sscanf(a.point.c_str(), "%d,%d,%d%c", &sg, &n1, &n2, &tail) != 3 || (sg != 1 && sg != -1)))
      throw Usage("--point expects sign,n1,n2 with sign 1 or -1");
    if (!j.window.contains(n1, n2)) throw Usage("--point lies outside --window");
    f = point_mass(j.params, j.window, sg, n1, n2);
  }
  if (a.transform) {
    const TransformResult r = forward_auto(f, 1e-13);
    fmt::print(std::cerr, "tail bound: {:.3e}\n", r.tail_bound);
    f = r.grid;
  }
  emit_grid(c, f);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"q-Weinstein transform tools"};
  app.require_subcommand(1);

  Common tc, bc, vc, gc;
  TransformArgs ta;
  BandwidthArgs ba;
  VerifyArgs va;
  GenArgs ga;

  auto* t = app.add_subcommand("transform", "forward or inverse transform of a grid file");
  add_common(t, tc);
  t->add_option("input", ta.input, "grid file")->required();
  t->add_option("--direction", ta.direction)->check(CLI::IsMember({"forward", "inverse"}));
  t->add_option("--out-window", ta.out_window, "output window (default: automatic for forward, --window for inverse)");
  t->add_option("--check", ta.check, "compare the result with this grid file; exit 3 above --tol");

  auto* b = app.add_subcommand("bandwidth", "bandwidth estimate of a transform");
  add_common(b, bc);
  b->add_option("input", ba.input, "grid file holding a transform")->required();
  b->add_option("-N,--N", ba.N, "number of Laplacian powers");
  b->add_flag("--no-literal", ba.no_literal, "spectral route only");
  b->add_option("--expect", ba.expect, "known radius; exit 3 when the estimate is off by more than --tol (default 0.02)");

  auto* v = app.add_subcommand("verify", "property suites on seeded random functions");
  add_common(v, vc);
  v->add_option("suite", va.suite)
      ->required()
      ->check(CLI::IsMember({"plancherel", "identities", "orthogonality", "sonine", "bounds", "pw-m"}));
  v->add_option("--count", va.count, "number of random functions");
  v->add_option("--lambda-window", va.lambda_window, "fixed lambda window instead of the automatic choice");

  auto* g = app.add_subcommand("gen", "write a fixture grid file");
  add_common(g, gc);
  g->add_option("kind", ga.kind)->check(CLI::IsMember({"random", "bump", "point", "zero"}));
  g->add_option("--support", ga.support, "support window for random and bump");
  g->add_option("--point", ga.point, "sign,n1,n2 for point");
  g->add_flag("--transform", ga.transform, "write the forward transform instead");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (t->parsed()) return cmd_transform(tc, ta);
    if (b->parsed()) return cmd_bandwidth(bc, ba);
    if (v->parsed()) return cmd_verify(vc, va);
    return cmd_gen(gc, ga);
  } catch (const io::ParseError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return usage;
  } catch (const Usage& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return usage;
  } catch (const std::invalid_argument& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return usage;
  } catch (const DivergenceError& e) {
    fmt::print(std::cerr, "divergence: {}\n", e.what());
    return numerical;
  } catch (const TaintError& e) {
    fmt::print(std::cerr, "taint: {}\n", e.what());
    return numerical;
  } catch (const PoleError& e) {
    fmt::print(std::cerr, "pole: {}\n", e.what());
    return numerical;
  } catch (const std::exception& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return numerical;
  }
}
