// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ecf/geometry.hpp"
#include "ecf/power_control.hpp"
#include "ecf/successive.hpp"
#include "ecf/types.hpp"

namespace ecf {

enum class SchemeBase { CF, MRC, Para, Succ };

struct SchemeSpec {
  std::string name;  // registry spelling, echoed into records
  SchemeBase base = SchemeBase::CF;
  bool aps = false;  // large-scale-fading AP selection ahead of power control
  bool lsf = false;  // beta replaces g inside power control and ordering
  UeOrderStrategy strategy = UeOrderStrategy::Hungarian;
};

// Accepts CF, MRC, PARA, SUCC-RP, SUCC-NORM, SUCC-HUNGARIAN, bare SUCC (uses
// the default order) with optional APS-/LSF- prefixes. Throws on unknown
// names.
SchemeSpec parse_scheme(const std::string& name, UeOrderStrategy default_order);

struct SchemeOptions {
  PowerSolveOptions solver;
  SuccRateMode succ_mode = SuccRateMode::Literal;
  int max_ues_per_ap = 0;  // 0 disables the UE-centric cap
  int prime = 257;
};

struct SchemeOutcome {
  RateReport report;
  bool solver_fallback = false;     // power scan fell back to equal power
  bool recoverable_all = false;     // every served UE recoverable mod p
  std::vector<int> used_rows;       // AP indices whose combinations were used
  std::optional<DecodingPlan> plan; // successive schemes only
};

// Per-realization pipeline state shared across schemes so paired comparisons
// see identical coefficient selections.
class RealizationPipeline {
 public:
  RealizationPipeline(const ChannelRealization& ch, double p_total, const SchemeOptions& opt);

  SchemeOutcome run(const SchemeSpec& spec);

  const std::vector<GaussianIntegerVector>& coefficients() const { return a_rows_; }
  const std::vector<VectorXcd>& channel_rows() const { return g_rows_; }
  const std::vector<VectorXcd>& lsf_rows() const { return beta_rows_; }
  const VectorXd& equal_power() const { return p_eq_; }
  int served_ues() const { return served_; }

 private:
  std::vector<int> selection(bool lsf_scored);

  const ChannelRealization& ch_;
  double p_total_;
  SchemeOptions opt_;
  VectorXd p_eq_;
  std::vector<VectorXcd> g_rows_;
  std::vector<VectorXcd> beta_rows_;  // sqrt(beta / sigma^2), real amplitudes
  std::vector<GaussianIntegerVector> a_rows_;
  std::vector<int> nonzero_rows_;
  int served_ = 0;
  int target_rank_ = 0;
  std::optional<std::vector<int>> sel_lsf_;
  std::optional<std::vector<int>> sel_noise_;
};

}  // namespace ecf
