// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ecf/types.hpp"

namespace ecf {

// MMSE equalization factor b = g^H P a / (1 + g^H P g)
cplx mmse_factor(const VectorXd& p_diag, const VectorXcd& g, const GaussianIntegerVector& a);

// Minimum effective noise for parallel computation,
// a^H (P^-1 + g g^H)^-1 a, evaluated as a^H P a - |a^H P g|^2 / (1 + g^H P g)
// so zero powers need no special casing.
double effective_noise_parallel(const VectorXd& p_diag, const VectorXcd& g,
                                const GaussianIntegerVector& a);
double effective_noise_parallel(const VectorXd& p_diag, const VectorXcd& g, const VectorXcd& a);

// Effective noise with side information: || N F a ||^2 where F is the
// Hermitian square root of (P^-1 + g g^H)^-1 and N projects onto the
// orthogonal complement of span{F a_prev}. Throws std::invalid_argument when
// the prior vectors are linearly dependent over C.
double effective_noise_successive(const VectorXd& p_diag, const VectorXcd& g,
                                  const VectorXcd& a, const std::vector<VectorXcd>& a_prev);

// R_l = min over selected rows m with a_ml != 0 of log+(P_l / sigma^2_m);
// UEs with no nonzero coefficient get rate zero.
RateReport ue_rates_parallel(const VectorXd& p_diag, const std::vector<VectorXcd>& g_rows,
                             const std::vector<GaussianIntegerVector>& a_rows);

// Per-UE recoverability over Z_p from the stacked real/imaginary coefficient
// matrix of the forwarded combinations.
std::vector<bool> recoverable(const std::vector<GaussianIntegerVector>& a_rows, int prime_p);

enum class ComputationScheme { Parallel, Successive };

// real fronthaul symbols per channel use for m_selected forwarding APs
int fronthaul_load(ComputationScheme scheme, int m_selected);

}  // namespace ecf
