// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ecf/types.hpp"

namespace ecf {

// Large-scale-fading score per AP: sum of all entries of J with beta in place
// of the instantaneous gains, which collapses to 2 (sum_l |a_ml| beta_ml)^2.
VectorXd lsf_scores(const MatrixXd& beta, const std::vector<GaussianIntegerVector>& a_rows);

// Greedy selection in descending score order, accepting an AP only when it
// raises the complex numerical rank of the accumulated coefficient matrix.
// Returns exactly `target` indices or throws naming the achieved rank.
std::vector<int> greedy_select(const std::vector<GaussianIntegerVector>& a_rows,
                               const VectorXd& scores, int target);

inline constexpr double kRankTolerance = 1e-9;  // relative singular-value cutoff

// numerical rank of the rows-as-matrix over C
int coefficient_rank(const std::vector<GaussianIntegerVector>& a_rows);

// Each AP keeps its max_ues_per_ap strongest UEs by beta; the mask zeroes
// excluded entries downstream. A UE left unserved keeps rate zero.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ue_centric_cap(const MatrixXd& beta,
                                                                   int max_ues_per_ap);

}  // namespace ecf
