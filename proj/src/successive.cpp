// SPDX-License-Identifier: Apache-2.0
#include "ecf/successive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ecf/ap_selection.hpp"
#include "ecf/rate_core.hpp"

namespace ecf {

namespace {

int rank_with(const std::vector<VectorXcd>& rows, const VectorXcd& extra) {
  MatrixXcd m(static_cast<Eigen::Index>(rows.size()) + 1, extra.size());
  for (size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i];
  m.row(static_cast<Eigen::Index>(rows.size())) = extra;
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

DecodingPlan order_combinations(const std::vector<GaussianIntegerVector>& a_rows,
                                const std::vector<VectorXcd>& g_rows, double p_total,
                                const PowerSolveOptions& opts) {
  if (a_rows.size() != g_rows.size() || a_rows.empty()) {
    throw std::invalid_argument("order_combinations: row count mismatch or empty");
  }
  const int target_rank = coefficient_rank(a_rows);
  if (target_rank == 0) throw std::invalid_argument("order_combinations: all rows zero");

  const size_t m_rows = a_rows.size();
  std::vector<bool> used(m_rows, false);

  // step 1: every candidate row gets its own locally optimized power; the
  // minimal-noise row fixes the plan's power matrix
  int first = -1;
  double first_noise = std::numeric_limits<double>::infinity();
  PowerAllocation first_power;
  for (size_t i = 0; i < m_rows; ++i) {
    if (a_rows[i].is_zero()) continue;
    auto [alloc, noise] = optimize_single_combination(a_rows[i], g_rows[i], p_total, opts);
    if (noise < first_noise) {
      first_noise = noise;
      first = static_cast<int>(i);
      first_power = std::move(alloc);
    }
  }
  if (first < 0) throw std::invalid_argument("order_combinations: all rows zero");

  DecodingPlan plan;
  plan.power = std::move(first_power);
  plan.order.push_back(first);
  plan.step_noises.push_back(
      effective_noise_parallel(plan.power.p, g_rows[static_cast<size_t>(first)],
                               a_rows[static_cast<size_t>(first)]));
  used[static_cast<size_t>(first)] = true;

  std::vector<VectorXcd> side{a_rows[static_cast<size_t>(first)].to_complex()};

  while (static_cast<int>(plan.order.size()) < target_rank) {
    std::vector<std::pair<double, int>> noise_order;
    for (size_t i = 0; i < m_rows; ++i) {
      if (used[i] || a_rows[i].is_zero()) continue;
      const double s2 =
          effective_noise_successive(plan.power.p, g_rows[i], a_rows[i].to_complex(), side);
      noise_order.emplace_back(s2, static_cast<int>(i));
    }
    std::sort(noise_order.begin(), noise_order.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return a.second < b.second;
    });

    const int current = static_cast<int>(plan.order.size());
    int chosen = -1;
    double chosen_noise = 0.0;
    for (const auto& [s2, idx] : noise_order) {
      if (rank_with(side, a_rows[static_cast<size_t>(idx)].to_complex()) > current) {
        chosen = idx;
        chosen_noise = s2;
        break;
      }
    }
    if (chosen < 0) {
      throw std::runtime_error("order_combinations: no rank-increasing row at step " +
                               std::to_string(current + 1));
    }
    plan.order.push_back(chosen);
    plan.step_noises.push_back(chosen_noise);
    side.push_back(a_rows[static_cast<size_t>(chosen)].to_complex());
    used[static_cast<size_t>(chosen)] = true;
  }
  return plan;
}

std::vector<double> plan_step_noises(const DecodingPlan& plan,
                                     const std::vector<GaussianIntegerVector>& a_rows,
                                     const std::vector<VectorXcd>& g_rows) {
  std::vector<double> noises;
  std::vector<VectorXcd> side;
  for (int idx : plan.order) {
    const auto& a = a_rows[static_cast<size_t>(idx)];
    noises.push_back(
        effective_noise_successive(plan.power.p, g_rows[static_cast<size_t>(idx)],
                                   a.to_complex(), side));
    side.push_back(a.to_complex());
  }
  return noises;
}

namespace {

std::vector<int> hungarian_min(const MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_of_col(n);
  for (int j = 1; j <= n; ++j) row_of_col[static_cast<size_t>(j - 1)] = match[j] - 1;
  return row_of_col;
}

}  // namespace

Assignment hungarian_assign(const MatrixXd& c) {
  if (c.rows() != c.cols() || c.rows() == 0) {
    throw std::invalid_argument("hungarian_assign: square nonempty matrix required");
  }
  if (!c.allFinite()) throw std::invalid_argument("hungarian_assign: entries must be finite");
  const double c_max = c.maxCoeff();
  const MatrixXd cost = (c_max - c.array()).matrix();
  Assignment out;
  out.ue_of_step = hungarian_min(cost);
  return out;
}

Assignment assign_ues(const DecodingPlan& plan, UeOrderStrategy strategy,
                      const std::vector<VectorXcd>& strategy_rows,
                      const std::vector<GaussianIntegerVector>& a_rows) {
  const int steps = plan.steps();
  const Eigen::Index l_ues = a_rows[0].size();
  Assignment out;
  out.ue_of_step.assign(static_cast<size_t>(steps), -1);

  auto eligible = [&](int step, Eigen::Index l) {
    return a_rows[static_cast<size_t>(plan.order[static_cast<size_t>(step)])].nonzero_at(l);
  };

  if (strategy == UeOrderStrategy::Hungarian) {
    // rows are UEs, columns steps; ineligible pairs contribute zero rate
    const int n = std::max(steps, static_cast<int>(l_ues));
    MatrixXd c = MatrixXd::Zero(n, n);
    for (int m = 0; m < steps; ++m) {
      const double s2 = plan.step_noises[static_cast<size_t>(m)];
      for (Eigen::Index l = 0; l < l_ues; ++l) {
        if (!eligible(m, l)) continue;
        c(l, m) = (plan.power.p[l] <= 0.0 || s2 <= 0.0) ? 0.0 : log2_pos(plan.power.p[l] / s2);
      }
    }
    const Assignment solved = hungarian_assign(c);
    for (int m = 0; m < steps; ++m) {
      const int ue = solved.ue_of_step[static_cast<size_t>(m)];
      out.ue_of_step[static_cast<size_t>(m)] = ue < static_cast<int>(l_ues) ? ue : -1;
    }
  } else {
    // per-step greedy over unassigned eligible UEs
    std::vector<bool> taken(static_cast<size_t>(l_ues), false);
    VectorXd norms = VectorXd::Zero(l_ues);
    if (strategy == UeOrderStrategy::ChannelNorm) {
      for (int m = 0; m < steps; ++m) {
        const auto& row = strategy_rows[static_cast<size_t>(plan.order[static_cast<size_t>(m)])];
        for (Eigen::Index l = 0; l < l_ues; ++l) norms[l] += std::norm(row[l]);
      }
      norms = norms.cwiseSqrt();
    }
    for (int m = 0; m < steps; ++m) {
      const auto& row = strategy_rows[static_cast<size_t>(plan.order[static_cast<size_t>(m)])];
      int pick = -1;
      double best = -1.0;
      for (Eigen::Index l = 0; l < l_ues; ++l) {
        if (taken[static_cast<size_t>(l)] || !eligible(m, l)) continue;
        const double score = strategy == UeOrderStrategy::ReceivedPower
                                 ? plan.power.p[l] * std::norm(row[l])
                                 : norms[l];
        if (score > best) {
          best = score;
          pick = static_cast<int>(l);
        }
      }
      if (pick >= 0) {
        out.ue_of_step[static_cast<size_t>(m)] = pick;
        taken[static_cast<size_t>(pick)] = true;
      }
    }
  }

  for (int m = 0; m < steps; ++m) {
    if (out.ue_of_step[static_cast<size_t>(m)] < 0) out.partial = true;
  }
  return out;
}

RateReport succ_rates(const DecodingPlan& plan, const Assignment& assignment,
                      const std::vector<GaussianIntegerVector>& a_rows,
                      const PowerAllocation& p, SuccRateMode mode,
                      const std::vector<double>* step_noises_override) {
  const int steps = plan.steps();
  if (static_cast<int>(assignment.ue_of_step.size()) != steps) {
    throw std::invalid_argument("succ_rates: assignment/plan mismatch");
  }
  const std::vector<double>& noises =
      step_noises_override != nullptr ? *step_noises_override : plan.step_noises;
  const Eigen::Index l_ues = a_rows[0].size();

  RateReport rep;
  rep.per_ue_rates = VectorXd::Zero(l_ues);
  rep.effective_noises =
      Eigen::Map<const VectorXd>(noises.data(), static_cast<Eigen::Index>(noises.size()));

  for (int m = 0; m < steps; ++m) {
    const int ue = assignment.ue_of_step[static_cast<size_t>(m)];
    if (ue < 0) continue;
    const auto& a_row = a_rows[static_cast<size_t>(plan.order[static_cast<size_t>(m)])];
    if (!a_row.nonzero_at(ue)) continue;  // ineligible pair decodes nothing
    double s2 = noises[static_cast<size_t>(m)];
    if (mode == SuccRateMode::Conservative) {
      for (int j = 0; j <= m; ++j) {
        const auto& aj = a_rows[static_cast<size_t>(plan.order[static_cast<size_t>(j)])];
        if (aj.nonzero_at(ue)) s2 = std::max(s2, noises[static_cast<size_t>(j)]);
      }
    }
    rep.per_ue_rates[ue] =
        (p.p[ue] <= 0.0 || s2 <= 0.0) ? 0.0 : log2_pos(p.p[ue] / s2);
  }
  rep.sum_rate = rep.per_ue_rates.sum();
  rep.fronthaul_symbols_per_use = fronthaul_load(ComputationScheme::Successive, steps);
  return rep;
}

}  // namespace ecf
