// SPDX-License-Identifier: Apache-2.0
#include "ecf/schemes.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "ecf/ap_selection.hpp"
#include "ecf/baselines.hpp"
#include "ecf/coeff_select.hpp"
#include "ecf/rate_core.hpp"

namespace ecf {

SchemeSpec parse_scheme(const std::string& name, UeOrderStrategy default_order) {
  SchemeSpec spec;
  spec.name = name;
  spec.strategy = default_order;

  std::vector<std::string> parts;
  size_t pos = 0;
  while (pos <= name.size()) {
    const size_t dash = name.find('-', pos);
    if (dash == std::string::npos) {
      parts.push_back(name.substr(pos));
      break;
    }
    parts.push_back(name.substr(pos, dash - pos));
    pos = dash + 1;
  }

  size_t i = 0;
  while (i < parts.size() && (parts[i] == "APS" || parts[i] == "LSF")) {
    if (parts[i] == "APS") spec.aps = true;
    if (parts[i] == "LSF") spec.lsf = true;
    ++i;
  }
  if (i >= parts.size()) throw std::invalid_argument("unknown scheme name: " + name);

  const std::string& base = parts[i];
  const size_t rest = parts.size() - i - 1;
  if (base == "CF" && rest == 0 && !spec.aps && !spec.lsf) {
    spec.base = SchemeBase::CF;
  } else if (base == "MRC" && rest == 0 && !spec.aps && !spec.lsf) {
    spec.base = SchemeBase::MRC;
  } else if (base == "PARA" && rest == 0) {
    spec.base = SchemeBase::Para;
  } else if (base == "SUCC") {
    spec.base = SchemeBase::Succ;
    if (rest == 1) {
      const std::string& s = parts[i + 1];
      if (s == "RP") {
        spec.strategy = UeOrderStrategy::ReceivedPower;
      } else if (s == "NORM") {
        spec.strategy = UeOrderStrategy::ChannelNorm;
      } else if (s == "HUNGARIAN") {
        spec.strategy = UeOrderStrategy::Hungarian;
      } else {
        throw std::invalid_argument("unknown scheme name: " + name);
      }
    } else if (rest != 0) {
      throw std::invalid_argument("unknown scheme name: " + name);
    }
  } else {
    throw std::invalid_argument("unknown scheme name: " + name);
  }
  return spec;
}

namespace {

// coefficient selection restricted to a serving mask; excluded UEs keep zero
GaussianIntegerVector select_masked(const VectorXd& p_eq, const VectorXcd& g_row,
                                    const std::vector<char>& serve) {
  const Eigen::Index l = g_row.size();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < l; ++i) {
    if (serve[static_cast<size_t>(i)]) keep.push_back(i);
  }
  if (keep.empty()) return GaussianIntegerVector(l);
  VectorXd p_sub(static_cast<Eigen::Index>(keep.size()));
  VectorXcd g_sub(static_cast<Eigen::Index>(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i) {
    p_sub[static_cast<Eigen::Index>(i)] = p_eq[keep[i]];
    g_sub[static_cast<Eigen::Index>(i)] = g_row[keep[i]];
  }
  const GaussianIntegerVector sub = select_coeff_complex(p_sub, g_sub);
  GaussianIntegerVector full(l);
  for (size_t i = 0; i < keep.size(); ++i) {
    full.re[keep[i]] = sub.re[static_cast<Eigen::Index>(i)];
    full.im[keep[i]] = sub.im[static_cast<Eigen::Index>(i)];
  }
  return full;
}

}  // namespace

RealizationPipeline::RealizationPipeline(const ChannelRealization& ch, double p_total,
                                         const SchemeOptions& opt)
    : ch_(ch), p_total_(p_total), opt_(opt) {
  const Eigen::Index m_aps = ch.num_aps();
  const Eigen::Index l_ues = ch.num_ues();
  p_eq_ = VectorXd::Constant(l_ues, p_total / static_cast<double>(l_ues));

  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> mask;
  if (opt_.max_ues_per_ap > 0) mask = ue_centric_cap(ch.beta, opt_.max_ues_per_ap);

  const MatrixXd beta_amp = ch.beta_normalized().cwiseSqrt();
  g_rows_.reserve(static_cast<size_t>(m_aps));
  beta_rows_.reserve(static_cast<size_t>(m_aps));
  a_rows_.reserve(static_cast<size_t>(m_aps));
  for (Eigen::Index m = 0; m < m_aps; ++m) {
    g_rows_.push_back(ch.g.row(m).transpose());
    beta_rows_.push_back(beta_amp.row(m).transpose().cast<cplx>());
    std::vector<char> serve(static_cast<size_t>(l_ues), 1);
    if (opt_.max_ues_per_ap > 0) {
      for (Eigen::Index l = 0; l < l_ues; ++l) serve[static_cast<size_t>(l)] = mask(m, l);
    }
    a_rows_.push_back(select_masked(p_eq_, g_rows_.back(), serve));
    if (!a_rows_.back().is_zero()) nonzero_rows_.push_back(static_cast<int>(m));
  }

  for (Eigen::Index l = 0; l < l_ues; ++l) {
    for (const auto& a : a_rows_) {
      if (a.nonzero_at(l)) {
        ++served_;
        break;
      }
    }
  }
  std::vector<GaussianIntegerVector> nz;
  for (int m : nonzero_rows_) nz.push_back(a_rows_[static_cast<size_t>(m)]);
  target_rank_ = std::min(served_, nz.empty() ? 0 : coefficient_rank(nz));
}

std::vector<int> RealizationPipeline::selection(bool lsf_scored) {
  auto& memo = lsf_scored ? sel_lsf_ : sel_noise_;
  if (memo) return *memo;
  if (target_rank_ == 0) throw std::runtime_error("pipeline: no UE served by any combination");

  VectorXd scores(static_cast<Eigen::Index>(a_rows_.size()));
  if (lsf_scored) {
    scores = lsf_scores(ch_.beta, a_rows_);
  } else {
    for (size_t m = 0; m < a_rows_.size(); ++m) {
      scores[static_cast<Eigen::Index>(m)] =
          a_rows_[m].is_zero()
              ? -std::numeric_limits<double>::infinity()
              : -effective_noise_parallel(p_eq_, g_rows_[m], a_rows_[m]);
    }
  }
  memo = greedy_select(a_rows_, scores, target_rank_);
  return *memo;
}

SchemeOutcome RealizationPipeline::run(const SchemeSpec& spec) {
  SchemeOutcome out;

  if (spec.base == SchemeBase::MRC) {
    out.report = mrc_sum_rate(ch_.g, PowerAllocation(p_eq_, p_total_));
    out.recoverable_all = true;
    return out;
  }

  auto gather_a = [&](const std::vector<int>& idx) {
    std::vector<GaussianIntegerVector> v;
    v.reserve(idx.size());
    for (int m : idx) v.push_back(a_rows_[static_cast<size_t>(m)]);
    return v;
  };
  auto gather_rows = [&](const std::vector<VectorXcd>& src, const std::vector<int>& idx) {
    std::vector<VectorXcd> v;
    v.reserve(idx.size());
    for (int m : idx) v.push_back(src[static_cast<size_t>(m)]);
    return v;
  };

  if (spec.base == SchemeBase::CF) {
    const std::vector<int> sel = selection(false);
    out.used_rows = sel;
    out.report = ue_rates_parallel(p_eq_, gather_rows(g_rows_, sel), gather_a(sel));
  } else if (spec.base == SchemeBase::Para) {
    const std::vector<int> sel = selection(spec.aps);
    out.used_rows = sel;
    const auto a_sel = gather_a(sel);
    const auto power_rows = gather_rows(spec.lsf ? beta_rows_ : g_rows_, sel);
    const auto [r_step, s_step] = default_scan_steps(a_sel, p_total_, opt_.solver);
    const ParallelPowerResult res =
        optimize_parallel(a_sel, power_rows, p_total_, r_step, s_step, opt_.solver);
    out.solver_fallback = res.fallback_equal_power;
    out.report = ue_rates_parallel(res.alloc.p, gather_rows(g_rows_, sel), a_sel);
  } else {
    // successive computation: order over all forwarding candidates, or over
    // the pre-selected set when AP selection is on
    const std::vector<int> cand = spec.aps ? selection(true) : nonzero_rows_;
    out.used_rows = cand;
    const auto a_cand = gather_a(cand);
    const auto order_rows = gather_rows(spec.lsf ? beta_rows_ : g_rows_, cand);
    DecodingPlan plan = order_combinations(a_cand, order_rows, p_total_, opt_.solver);

    const auto g_cand = gather_rows(g_rows_, cand);
    std::vector<double> report_noises =
        spec.lsf ? plan_step_noises(plan, a_cand, g_cand) : plan.step_noises;

    const Assignment asg = assign_ues(plan, spec.strategy, order_rows, a_cand);
    out.report = succ_rates(plan, asg, a_cand, plan.power, opt_.succ_mode, &report_noises);

    // narrow used rows to the decoded prefix for fronthaul accounting
    std::vector<int> decoded;
    for (int step_idx : plan.order) decoded.push_back(cand[static_cast<size_t>(step_idx)]);
    out.used_rows = decoded;
    out.plan = std::move(plan);
  }

  // recoverability audit of the forwarded combinations
  if (!out.used_rows.empty()) {
    const auto used = gather_a(out.used_rows);
    const std::vector<bool> rec = recoverable(used, opt_.prime);
    out.recoverable_all = true;
    for (Eigen::Index l = 0; l < ch_.num_ues(); ++l) {
      bool involved = false;
      for (const auto& a : used) involved = involved || a.nonzero_at(l);
      if (involved && !rec[static_cast<size_t>(l)]) out.recoverable_all = false;
    }
  }
  return out;
}

}  // namespace ecf
