// SPDX-License-Identifier: Apache-2.0
#include "ecf/baselines.hpp"

#include <algorithm>
#include <stdexcept>

#include "ecf/ap_selection.hpp"
#include "ecf/coeff_select.hpp"
#include "ecf/rate_core.hpp"

namespace ecf {

RateReport cf_equal_power(const MatrixXcd& g, const MatrixXd& beta, double p_total,
                          bool use_ap_selection) {
  const Eigen::Index m_aps = g.rows();
  const Eigen::Index l_ues = g.cols();
  const VectorXd p_eq = VectorXd::Constant(l_ues, p_total / static_cast<double>(l_ues));

  std::vector<GaussianIntegerVector> a_rows;
  std::vector<VectorXcd> g_rows;
  a_rows.reserve(static_cast<size_t>(m_aps));
  g_rows.reserve(static_cast<size_t>(m_aps));
  for (Eigen::Index m = 0; m < m_aps; ++m) {
    g_rows.push_back(g.row(m).transpose());
    a_rows.push_back(select_coeff_complex(p_eq, g_rows.back()));
  }

  // number of UEs covered by at least one combination
  int served = 0;
  for (Eigen::Index l = 0; l < l_ues; ++l) {
    for (const auto& a : a_rows) {
      if (a.nonzero_at(l)) {
        ++served;
        break;
      }
    }
  }
  const int target = std::min<int>(served, coefficient_rank(a_rows));
  if (target == 0) throw std::runtime_error("cf_equal_power: no UE served by any combination");

  VectorXd scores(m_aps);
  if (use_ap_selection) {
    scores = lsf_scores(beta, a_rows);
  } else {
    // recovery-time ranking by equal-power effective noise (lower is better)
    for (Eigen::Index m = 0; m < m_aps; ++m) {
      scores[m] = -effective_noise_parallel(p_eq, g_rows[static_cast<size_t>(m)],
                                            a_rows[static_cast<size_t>(m)]);
    }
  }
  const std::vector<int> sel = greedy_select(a_rows, scores, target);

  std::vector<VectorXcd> g_sel;
  std::vector<GaussianIntegerVector> a_sel;
  for (int idx : sel) {
    g_sel.push_back(g_rows[static_cast<size_t>(idx)]);
    a_sel.push_back(a_rows[static_cast<size_t>(idx)]);
  }
  return ue_rates_parallel(p_eq, g_sel, a_sel);
}

RateReport mrc_sum_rate(const MatrixXcd& g, const PowerAllocation& p) {
  const Eigen::Index l_ues = g.cols();
  if (p.p.size() != l_ues) throw std::invalid_argument("mrc_sum_rate: power size mismatch");

  RateReport rep;
  rep.per_ue_rates.resize(l_ues);
  rep.effective_noises = VectorXd::Zero(l_ues);
  for (Eigen::Index l = 0; l < l_ues; ++l) {
    const double norm2 = g.col(l).squaredNorm();
    double interference = 0.0;
    for (Eigen::Index k = 0; k < l_ues; ++k) {
      if (k == l) continue;
      interference += p.p[k] * std::norm(g.col(k).dot(g.col(l)));
    }
    const double sinr = norm2 > 0.0
                            ? p.p[l] * norm2 * norm2 / (norm2 + interference)
                            : 0.0;
    rep.per_ue_rates[l] = std::log2(1.0 + sinr);
    rep.effective_noises[l] = norm2 + interference;
  }
  rep.sum_rate = rep.per_ue_rates.sum();
  rep.fronthaul_symbols_per_use = 2 * static_cast<int>(g.rows());
  return rep;
}

double capped_rate(double r_sum, double r0) {
  if (r0 < 0.0) throw std::invalid_argument("capped_rate: capacity must be >= 0");
  return std::min(r_sum, r0);
}

}  // namespace ecf
