// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <utility>

#include "ecf/types.hpp"

namespace ecf {

// Signed permutation that maps a real vector to a nonnegative, nondecreasing
// one. perm[j] is the original index placed at sorted position j and signs[j]
// the sign flip applied there.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> signs;

  VectorXd apply(const VectorXd& x) const {
    VectorXd y(x.size());
    for (size_t j = 0; j < perm.size(); ++j) y[j] = signs[j] * x[perm[j]];
    return y;
  }

  VectorXd apply_inverse(const VectorXd& y) const {
    VectorXd x(y.size());
    for (size_t j = 0; j < perm.size(); ++j) x[perm[j]] = signs[j] * y[j];
    return x;
  }

  VectorXi apply_inverse(const VectorXi& y) const {
    VectorXi x(y.size());
    for (size_t j = 0; j < perm.size(); ++j) x[perm[j]] = signs[j] * y[j];
    return x;
  }
};

std::pair<SignedPermutation, VectorXd> normalize_channel(const VectorXd& g_real);

// K = floor(lambda_max(I + g P g^T)) = floor(1 + g^T P g), at least 1,
// capped to keep the candidate loop bounded.
int candidate_bound(const VectorXd& p_diag, const VectorXd& g_sorted);

inline constexpr int kCandidateBoundCap = 10000;

// count of selections where the candidate-bound cap was binding
std::atomic<uint64_t>& candidate_bound_cap_hits();

// QP-relaxation pick of an integer coefficient vector for one real channel.
VectorXi select_real_coeff(const VectorXd& p_diag, const VectorXd& g_real);

// Per-part real selection plus a final argmin over the combined vector,
// single parts and all Gaussian-integer unit vectors under the complex
// effective-noise objective.
GaussianIntegerVector select_coeff_complex(const VectorXd& p_diag, const VectorXcd& g_complex);

// True argmin of a^T G a over nonzero integer vectors with |a|_inf <= k_bound.
// Search space (2K+1)^L, so only L <= 4 is accepted.
VectorXi exhaustive_coeff_oracle(const VectorXd& p_diag, const VectorXd& g_real, int k_bound);

// Quadratic objective a^T (P^-1 + g g^T)^-1 a evaluated without inverting P,
// restricted to positive-power entries. Shared by selection and the oracle.
double real_coeff_objective(const VectorXd& p_diag, const VectorXd& g_real, const VectorXi& a);

}  // namespace ecf
