// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <sstream>

#include "qw/corpus.hpp"
#include "qw/gridio.hpp"

using namespace qw;
using namespace qw::io;

namespace {

bool same(const GridFunction& a, const GridFunction& b) {
  return a.window().clean() == b.window().clean() && a.parity() == b.parity() && a.params().q == b.params().q &&
         a.params().alpha == b.params().alpha && a.data() == b.data();
}

int error_line(const std::string& text) {
  std::istringstream is(text);
  try {
    read_grid(is);
  } catch (const ParseError& e) {
    return e.line;
  }
  return -1;
}

}  // namespace

TEST_CASE("grid files round-trip") {
  const QParams p(0.7244919590005157, 0.5);
  const LatticeWindow w(-3, 5, -2, 6);
  const GridFunction f = random_even_function(p, w, LatticeWindow(-1, 3, 0, 4), 17);
  for (Format fmt : {Format::csv, Format::json}) {
    std::stringstream ss;
    write_grid(ss, f, fmt);
    CHECK(same(read_grid(ss), f));
  }
  std::stringstream empty;
  write_grid(empty, GridFunction(p, w), Format::csv);
  const GridFunction g = read_grid(empty);
  CHECK(g.max_abs() == 0.0);
  CHECK(g.window() == w);
}

TEST_CASE("malformed grid files report the line") {
  CHECK(error_line("# qweinstein v2 q=0.5 alpha=0 parity=even n1=[0,1] n2=[0,1]\n") == 1);
  CHECK(error_line("\n# qweinstein v1 q=1.5 alpha=0 parity=even n1=[0,1] n2=[0,1]\n") == 2);
  const std::string h = "# qweinstein v1 q=0.5 alpha=0 parity=even n1=[0,1] n2=[0,1]\nsign,n1,n2,re,im\n";
  CHECK(error_line(h + "1,0,0,1,0\n1,0,0,2,0\n") == 4);
  CHECK(error_line(h + "1,5,0,1,0\n") == 3);
  CHECK(error_line(h + "2,0,0,1,0\n") == 3);
  CHECK(error_line(h + "1,0,0,x,0\n") == 3);
  CHECK(error_line(h + "1,0,0,1\n") == 3);
  CHECK(error_line(h + "# comment\n-1,1,1,0.5,-0.5\n") == -1);
  CHECK(error_line("{\"format\": \"qweinstein\", \"version\": 1}") == 0);
  CHECK(error_line("{ not json") == 0);
}

TEST_CASE("job configuration") {
  std::istringstream is(
      "# batch\nq = 0.5\nalpha=0.5\nwindow=-2,6,-3,7\nseed=42\nn_max=80\nsuite=plancherel  # trailing\n");
  const JobConfig c = parse_config(is);
  CHECK(c.params.q == 0.5);
  CHECK(c.params.alpha == 0.5);
  CHECK(c.window == LatticeWindow(-2, 6, -3, 7));
  CHECK(c.seed == 42);
  CHECK(c.policy.n_max == 80);
  CHECK(c.options.at("suite") == "plancherel");

  std::istringstream again(format_config(c));
  const JobConfig d = parse_config(again);
  CHECK(format_config(d) == format_config(c));
  CHECK(d.policy.product_tol == c.policy.product_tol);

  std::istringstream bad("q=0.5\nnonsense\n");
  CHECK_THROWS_AS(parse_config(bad), ParseError);
  std::istringstream badq("q=2\n");
  CHECK_THROWS_AS(parse_config(badq), ParseError);
  CHECK(parse_window("1, 2,3,4") == LatticeWindow(1, 2, 3, 4));
  CHECK_THROWS_AS(parse_window("1,2,3"), ParseError);
  CHECK_THROWS_AS(parse_format("xml"), InvalidParams);
}
