// SPDX-License-Identifier: Apache-2.0
#include "qw/gridio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace qw::io {

ParseError::ParseError(int l, const std::string& what)
    : std::runtime_error(l > 0 ? "line " + std::to_string(l) + ": " + what : what), line(l) {}

Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw InvalidParams("unknown format '" + s + "' (expected csv or json)");
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& s, int line, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  }
}

int to_int(const std::string& s, int line, const char* what) {
  int v = 0;
  const auto* end = s.data() + s.size();
  const auto [p, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || p != end) throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

Parity parse_parity(const std::string& s, int line) {
  if (s == "even") return Parity::even;
  if (s == "odd") return Parity::odd;
  throw ParseError(line, "parity must be even or odd, got '" + s + "'");
}

// Shared row insertion with the at-most-once and in-window checks.
struct RowSink {
  GridFunction& g;
  std::set<std::tuple<int, int, int>> seen;
  void add(int line, int s, int n1, int n2, double re, double im) {
    if (s != 1 && s != -1) throw ParseError(line, "sign must be 1 or -1");
    if (!g.window().contains(n1, n2)) throw ParseError(line, "point outside the header window");
    if (!seen.insert({s, n1, n2}).second) throw ParseError(line, "duplicate point");
    g.at(s, n1, n2) = cplx(re, im);
  }
};

GridFunction read_csv(std::istream& is, int skipped) {
  std::string line;
  int ln = skipped;
  while (std::getline(is, line)) {
    ++ln;
    if (!trim(line).empty()) break;
  }
  static const std::regex header(
      R"(^#\s*qweinstein\s+v1\s+q=(\S+)\s+alpha=(\S+)\s+parity=(\S+)\s+n1=\[(-?\d+),(-?\d+)\]\s+n2=\[(-?\d+),(-?\d+)\]\s*$)");
  std::smatch m;
  const std::string h = trim(line);
  if (!std::regex_match(h, m, header)) throw ParseError(ln, "malformed header (expected '# qweinstein v1 q=.. alpha=.. parity=.. n1=[a,b] n2=[c,d]')");
  QParams p;
  LatticeWindow w;
  try {
    p = QParams(to_double(m[1], ln, "q"), to_double(m[2], ln, "alpha"));
    w = LatticeWindow(to_int(m[4], ln, "n1"), to_int(m[5], ln, "n1"), to_int(m[6], ln, "n2"), to_int(m[7], ln, "n2"));
  } catch (const InvalidParams& e) {
    throw ParseError(ln, e.what());
  }
  GridFunction g(p, w, parse_parity(m[3], ln));
  RowSink sink{g, {}};
  while (std::getline(is, line)) {
    ++ln;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t == "sign,n1,n2,re,im") continue;
    std::vector<std::string> f;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(trim(cell));
    if (f.size() != 5) throw ParseError(ln, "expected 5 fields sign,n1,n2,re,im");
    sink.add(ln, to_int(f[0], ln, "sign"), to_int(f[1], ln, "n1"), to_int(f[2], ln, "n2"), to_double(f[3], ln, "re"),
             to_double(f[4], ln, "im"));
  }
  return g;
}

GridFunction read_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "qweinstein" || j.at("version") != 1) throw ParseError(0, "JSON: not a qweinstein v1 document");
    const auto n1 = j.at("n1").get<std::vector<int>>(), n2 = j.at("n2").get<std::vector<int>>();
    if (n1.size() != 2 || n2.size() != 2) throw ParseError(0, "JSON: n1 and n2 must be [min,max]");
    GridFunction g(QParams(j.at("q").get<double>(), j.at("alpha").get<double>()), LatticeWindow(n1[0], n1[1], n2[0], n2[1]),
                   parse_parity(j.at("parity").get<std::string>(), 0));
    RowSink sink{g, {}};
    int k = 0;
    for (const auto& r : j.at("rows")) {
      ++k;
      if (!r.is_array() || r.size() != 5) throw ParseError(0, "JSON: row " + std::to_string(k) + " must have 5 entries");
      try {
        sink.add(0, r[0].get<int>(), r[1].get<int>(), r[2].get<int>(), r[3].get<double>(), r[4].get<double>());
      } catch (const ParseError& e) {
        throw ParseError(0, "JSON: row " + std::to_string(k) + ": " + e.what());
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("JSON: ") + e.what());
  } catch (const InvalidParams& e) {
    throw ParseError(0, std::string("JSON: ") + e.what());
  }
}

}  // namespace

void write_grid(std::ostream& os, const GridFunction& f, Format fmt) {
  const auto& w = f.window();
  const char* par = f.parity() == Parity::even ? "even" : "odd";
  if (fmt == Format::csv) {
    os << "# qweinstein v1 q=" << num(f.params().q) << " alpha=" << num(f.params().alpha) << " parity=" << par << " n1=["
       << w.n1_min << "," << w.n1_max << "] n2=[" << w.n2_min << "," << w.n2_max << "]\n";
    os << "sign,n1,n2,re,im\n";
    f.for_each([&](int s, int a, int b) {
      const cplx v = f.at(s, a, b);
      if (v != cplx(0.0, 0.0)) os << s << "," << a << "," << b << "," << num(v.real()) << "," << num(v.imag()) << "\n";
    });
    return;
  }
  nlohmann::json j;
  j["format"] = "qweinstein";
  j["version"] = 1;
  j["q"] = f.params().q;
  j["alpha"] = f.params().alpha;
  j["parity"] = par;
  j["n1"] = {w.n1_min, w.n1_max};
  j["n2"] = {w.n2_min, w.n2_max};
  j["rows"] = nlohmann::json::array();
  f.for_each([&](int s, int a, int b) {
    const cplx v = f.at(s, a, b);
    if (v != cplx(0.0, 0.0)) j["rows"].push_back({s, a, b, v.real(), v.imag()});
  });
  os << j.dump(1) << "\n";
}

GridFunction read_grid(std::istream& is) {
  int skipped = 0;
  while (is && std::isspace(is.peek()))
    if (is.get() == '\n') ++skipped;
  if (is.peek() == '{') return read_json(is);
  return read_csv(is, skipped);
}

void write_grid_file(const std::string& path, const GridFunction& f, Format fmt) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_grid(os, f, fmt);
}

GridFunction read_grid_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError(0, "cannot open '" + path + "'");
  return read_grid(is);
}

LatticeWindow parse_window(const std::string& s) {
  std::vector<int> v;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) v.push_back(to_int(trim(cell), 0, "window bound"));
  if (v.size() != 4) throw ParseError(0, "window must be n1_min,n1_max,n2_min,n2_max");
  try {
    return LatticeWindow(v[0], v[1], v[2], v[3]);
  } catch (const InvalidParams& e) {
    throw ParseError(0, e.what());
  }
}

JobConfig parse_config(std::istream& is) {
  JobConfig c;
  double q = c.params.q, alpha = c.params.alpha;
  std::string line;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParseError(ln, "expected key=value");
    const std::string k = trim(t.substr(0, eq)), v = trim(t.substr(eq + 1));
    if (k == "q")
      q = to_double(v, ln, "q");
    else if (k == "alpha")
      alpha = to_double(v, ln, "alpha");
    else if (k == "window") {
      try {
        c.window = parse_window(v);
      } catch (const ParseError& e) {
        throw ParseError(ln, e.what());
      }
    } else if (k == "n_min")
      c.policy.n_min = to_int(v, ln, "n_min");
    else if (k == "n_max")
      c.policy.n_max = to_int(v, ln, "n_max");
    else if (k == "product_tol")
      c.policy.product_tol = to_double(v, ln, "product_tol");
    else if (k == "series_tol")
      c.policy.series_tol = to_double(v, ln, "series_tol");
    else if (k == "seed") {
      try {
        std::size_t pos = 0;
        c.seed = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw ParseError(ln, "bad seed '" + v + "'");
      }
    } else
      c.options[k] = v;
  }
  try {
    c.params = QParams(q, alpha);
    c.policy.validate();
  } catch (const InvalidParams& e) {
    throw ParseError(0, e.what());
  }
  return c;
}

JobConfig read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError(0, "cannot open '" + path + "'");
  return parse_config(is);
}

std::string format_config(const JobConfig& c) {
  std::ostringstream os;
  os << "q=" << num(c.params.q) << "\n";
  os << "alpha=" << num(c.params.alpha) << "\n";
  os << "window=" << c.window.n1_min << "," << c.window.n1_max << "," << c.window.n2_min << "," << c.window.n2_max << "\n";
  os << "n_min=" << c.policy.n_min << "\n";
  os << "n_max=" << c.policy.n_max << "\n";
  os << "product_tol=" << num(c.policy.product_tol) << "\n";
  os << "series_tol=" << num(c.policy.series_tol) << "\n";
  os << "seed=" << c.seed << "\n";
  for (const auto& [k, v] : c.options) os << k << "=" << v << "\n";
  return os.str();
}

}  // namespace qw::io
