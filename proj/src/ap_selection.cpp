// SPDX-License-Identifier: Apache-2.0
#include "ecf/ap_selection.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ecf {

VectorXd lsf_scores(const MatrixXd& beta, const std::vector<GaussianIntegerVector>& a_rows) {
  if (static_cast<size_t>(beta.rows()) != a_rows.size()) {
    throw std::invalid_argument("lsf_scores: row count mismatch");
  }
  VectorXd scores(beta.rows());
  for (Eigen::Index m = 0; m < beta.rows(); ++m) {
    double s = 0.0;
    for (Eigen::Index l = 0; l < beta.cols(); ++l) {
      s += std::sqrt(a_rows[static_cast<size_t>(m)].abs2(l)) * beta(m, l);
    }
    scores[m] = 2.0 * s * s;
  }
  return scores;
}

namespace {

int numerical_rank(const MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<MatrixXcd> svd(m);
  const VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] <= 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > kRankTolerance * sv[0]) ++r;
  }
  return r;
}

}  // namespace

int coefficient_rank(const std::vector<GaussianIntegerVector>& a_rows) {
  if (a_rows.empty()) return 0;
  MatrixXcd m(static_cast<Eigen::Index>(a_rows.size()), a_rows[0].size());
  for (size_t i = 0; i < a_rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = a_rows[i].to_complex();
  return numerical_rank(m);
}

std::vector<int> greedy_select(const std::vector<GaussianIntegerVector>& a_rows,
                               const VectorXd& scores, int target) {
  if (static_cast<size_t>(scores.size()) != a_rows.size()) {
    throw std::invalid_argument("greedy_select: score count mismatch");
  }
  if (target < 1) throw std::invalid_argument("greedy_select: target must be >= 1");

  std::vector<int> order(a_rows.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return a < b;  // deterministic tie-break
  });

  std::vector<int> selected;
  MatrixXcd acc(target, a_rows[0].size());
  int rank = 0;
  for (int idx : order) {
    if (a_rows[static_cast<size_t>(idx)].is_zero()) continue;
    acc.row(rank) = a_rows[static_cast<size_t>(idx)].to_complex();
    const int new_rank = numerical_rank(acc.topRows(rank + 1));
    if (new_rank > rank) {
      rank = new_rank;
      selected.push_back(idx);
      if (rank == target) return selected;
    }
  }
  throw std::runtime_error("greedy_select: rank requirement unreachable, achieved rank " +
                           std::to_string(rank));
}

Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> ue_centric_cap(const MatrixXd& beta,
                                                                   int max_ues_per_ap) {
  if (max_ues_per_ap < 1) throw std::invalid_argument("ue_centric_cap: cap must be >= 1");
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask(beta.rows(), beta.cols());
  mask.setConstant(false);
  std::vector<int> idx(static_cast<size_t>(beta.cols()));
  for (Eigen::Index m = 0; m < beta.rows(); ++m) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      if (beta(m, a) != beta(m, b)) return beta(m, a) > beta(m, b);
      return a < b;
    });
    const int keep = std::min<int>(max_ues_per_ap, static_cast<int>(beta.cols()));
    for (int k = 0; k < keep; ++k) mask(m, idx[static_cast<size_t>(k)]) = true;
  }
  return mask;
}

}  // namespace ecf
