// SPDX-License-Identifier: Apache-2.0
// Kernel values at lattice arguments.
//
// For lambda and x on the lattice every product lambda_i x_i is +-q^k, so
// the kernel factors only need cos(q^k;q^2), sin(q^k;q^2) and
// j_alpha(q^k;q^2) for integer k.  Large arguments (k << 0) are summed in
// MPFR because the series cancels catastrophically there.
#pragma once

#include <vector>

#include "qw/mp.hpp"
#include "qw/qcore.hpp"

namespace qw {

class KernelTable {
 public:
  explicit KernelTable(const QParams& p);

  const QParams& params() const { return params_; }
  void ensure(int kmin, int kmax);
  int kmin() const { return kmin_; }
  int kmax() const { return kmax_; }

  double cos(int k) const { return c_[idx(k)]; }
  double sin(int k) const { return s_[idx(k)]; }
  double j(int k) const { return j_[idx(k)]; }
  /// e(-i s q^k; q^2) = cos(q^k) - i s sin(q^k)
  cplx e_minus_i(int s, int k) const { return {c_[idx(k)], -s * s_[idx(k)]}; }

 private:
  std::size_t idx(int k) const { return static_cast<std::size_t>(k - kmin_); }
  void compute(int k, double& c, double& s, double& j) const;

  QParams params_;
  int kmin_ = 0, kmax_ = -1;
  std::vector<double> c_, s_, j_;
};

/// Process-wide memo of tables keyed by (q, alpha), extended on demand.
KernelTable& kernel_table(const QParams& p, int kmin, int kmax);

/// MPFR table at a fixed precision.
class KernelTableMP {
 public:
  KernelTableMP(const QParams& p, long bits, int kmin, int kmax);
  void ensure(int kmin, int kmax);
  long bits() const { return bits_; }
  int kmin() const { return kmin_; }
  int kmax() const { return kmax_; }
  const mp::Real& cos(int k) const { return c_[static_cast<std::size_t>(k - kmin_)]; }
  const mp::Real& sin(int k) const { return s_[static_cast<std::size_t>(k - kmin_)]; }
  const mp::Real& j(int k) const { return j_[static_cast<std::size_t>(k - kmin_)]; }

 private:
  void compute(int k, mp::Real& c, mp::Real& s, mp::Real& j) const;

  QParams params_;
  long bits_;
  int kmin_, kmax_;
  std::vector<mp::Real> c_, s_, j_;
};

/// Process-wide memo keyed by (q, alpha, bits), extended on demand.
const KernelTableMP& kernel_table_mp(const QParams& p, long bits, int kmin, int kmax);

}  // namespace qw
