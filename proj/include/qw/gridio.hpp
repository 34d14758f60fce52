// SPDX-License-Identifier: Apache-2.0
// Grid function files and job configuration.
//
// CSV layout:
//   # qweinstein v1 q=0.5 alpha=0 parity=even n1=[-4,8] n2=[-4,8]
//   sign,n1,n2,re,im
//   1,0,2,0.25,-0.5
// Only nonzero samples are written; absent points are zero.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>

#include "qw/qops.hpp"

namespace qw::io {

struct ParseError : std::runtime_error {
  ParseError(int line, const std::string& what);
  int line;
};

enum class Format { csv, json };
Format parse_format(const std::string& s);

void write_grid(std::ostream& os, const GridFunction& f, Format fmt);
/// Format is detected from the first non-blank character ('{' means JSON).
GridFunction read_grid(std::istream& is);

void write_grid_file(const std::string& path, const GridFunction& f, Format fmt);
GridFunction read_grid_file(const std::string& path);

struct JobConfig {
  QParams params{0.5, 0.0};
  LatticeWindow window{-4, 8, -4, 8};
  TruncationPolicy policy;
  std::uint64_t seed = 1;
  std::map<std::string, std::string> options;  // command-specific keys
};

/// key=value lines; '#' starts a comment.  Known keys: q, alpha, window
/// (n1_min,n1_max,n2_min,n2_max), n_min, n_max, product_tol, series_tol, seed.
/// Every other key lands in options.
JobConfig parse_config(std::istream& is);
JobConfig read_config_file(const std::string& path);
std::string format_config(const JobConfig& c);

/// "a,b,c,d" -> window
LatticeWindow parse_window(const std::string& s);

}  // namespace qw::io
