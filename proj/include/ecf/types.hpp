// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

namespace ecf {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::MatrixXi;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using Eigen::VectorXi;
using cplx = std::complex<double>;

// log+ in base 2: max(log2(x), 0); nonpositive arguments map to 0
inline double log2_pos(double x) { return x > 1.0 ? std::log2(x) : 0.0; }

// Gaussian-integer coefficient vector, stored as separate integer parts.
struct GaussianIntegerVector {
  VectorXi re;
  VectorXi im;

  GaussianIntegerVector() = default;
  explicit GaussianIntegerVector(Eigen::Index n) : re(VectorXi::Zero(n)), im(VectorXi::Zero(n)) {}

  Eigen::Index size() const { return re.size(); }

  bool is_zero() const { return re.isZero() && im.isZero(); }

  bool nonzero_at(Eigen::Index l) const { return re[l] != 0 || im[l] != 0; }

  VectorXcd to_complex() const {
    VectorXcd a(re.size());
    for (Eigen::Index i = 0; i < re.size(); ++i) a[i] = cplx(re[i], im[i]);
    return a;
  }

  double abs2(Eigen::Index l) const {
    return static_cast<double>(re[l]) * re[l] + static_cast<double>(im[l]) * im[l];
  }

  bool operator==(const GaussianIntegerVector& o) const { return re == o.re && im == o.im; }
};

// Per-trial rate outcome shared by all schemes.
struct RateReport {
  VectorXd per_ue_rates;             // bits per channel use, zero for unserved UEs
  double sum_rate = 0.0;             // sum of per_ue_rates
  VectorXd effective_noises;         // per selected AP (parallel) or per step (successive)
  int fronthaul_symbols_per_use = 0; // real symbols per channel use on the fronthaul
};

// Nonnegative per-UE transmit powers with a shared total budget.
struct PowerAllocation {
  VectorXd p;
  double total = 0.0;

  PowerAllocation() = default;
  PowerAllocation(VectorXd powers, double pt) : p(std::move(powers)), total(pt) {}

  static PowerAllocation equal(Eigen::Index l, double pt) {
    return PowerAllocation(VectorXd::Constant(l, pt / static_cast<double>(l)), pt);
  }
};

}  // namespace ecf
