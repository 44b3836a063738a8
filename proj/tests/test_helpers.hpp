// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ecf/rng.hpp"
#include "ecf/types.hpp"

namespace ecf::test {

inline VectorXd random_powers(Rng& rng, Eigen::Index l, double lo = 0.05, double hi = 2.0) {
  VectorXd p(l);
  for (Eigen::Index i = 0; i < l; ++i) p[i] = rng.uniform(lo, hi);
  return p;
}

inline VectorXcd random_channel(Rng& rng, Eigen::Index l, double scale = 1.0) {
  VectorXcd g(l);
  for (Eigen::Index i = 0; i < l; ++i) g[i] = scale * rng.cnormal();
  return g;
}

inline VectorXd random_real_channel(Rng& rng, Eigen::Index l, double scale = 1.0) {
  VectorXd g(l);
  for (Eigen::Index i = 0; i < l; ++i) g[i] = scale * rng.normal();
  return g;
}

inline GaussianIntegerVector random_coeff(Rng& rng, Eigen::Index l, int max_abs = 3) {
  GaussianIntegerVector a(l);
  do {
    for (Eigen::Index i = 0; i < l; ++i) {
      a.re[i] = rng.uniform_int(-max_abs, max_abs);
      a.im[i] = rng.uniform_int(-max_abs, max_abs);
    }
  } while (a.is_zero());
  return a;
}

inline VectorXd random_simplex(Rng& rng, Eigen::Index l, double total) {
  VectorXd p(l);
  for (Eigen::Index i = 0; i < l; ++i) p[i] = -std::log(std::max(rng.uniform(), 1e-300));
  return p * (total / p.sum());
}

}  // namespace ecf::test
