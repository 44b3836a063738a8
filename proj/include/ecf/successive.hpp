// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ecf/power_control.hpp"
#include "ecf/types.hpp"

namespace ecf {

// Decoding order for combinations with the power allocation frozen at step 1.
struct DecodingPlan {
  std::vector<int> order;          // candidate-row index decoded at each step
  PowerAllocation power;           // fixed from the first combination's optimization
  std::vector<double> step_noises; // successive effective noise per step

  int steps() const { return static_cast<int>(order.size()); }
};

enum class UeOrderStrategy { ReceivedPower, ChannelNorm, Hungarian };

struct Assignment {
  std::vector<int> ue_of_step;  // -1 marks a step with no eligible UE
  bool partial = false;
};

enum class SuccRateMode { Literal, Conservative };

// Algorithm-2 style ordering: step 1 takes the row of minimal locally
// optimized noise and freezes its power; later steps take the lowest-noise
// remaining row that increases the rank of the accumulated side information.
DecodingPlan order_combinations(const std::vector<GaussianIntegerVector>& a_rows,
                                const std::vector<VectorXcd>& g_rows, double p_total,
                                const PowerSolveOptions& opts);

// Recompute the plan's step noises against other channel rows (used to report
// instantaneous-channel rates for a plan built from large-scale fading).
std::vector<double> plan_step_noises(const DecodingPlan& plan,
                                     const std::vector<GaussianIntegerVector>& a_rows,
                                     const std::vector<VectorXcd>& g_rows);

// Map UEs to decoding steps. strategy_rows carries |g| (or beta under the LSF
// flag) for the candidate rows; only UEs with a nonzero coefficient at a step
// are eligible there.
Assignment assign_ues(const DecodingPlan& plan, UeOrderStrategy strategy,
                      const std::vector<VectorXcd>& strategy_rows,
                      const std::vector<GaussianIntegerVector>& a_rows);

// Maximize sum of C(ue_of_step(m), m) over bijections; rows are UEs, columns
// steps. Solved as min-cost assignment on (C_max - C).
Assignment hungarian_assign(const MatrixXd& c);

// Rates from a plan and an assignment. Literal mode charges each UE its
// assigned step's noise; conservative mode charges the maximum noise over
// steps up to the assignment that involve the UE.
RateReport succ_rates(const DecodingPlan& plan, const Assignment& assignment,
                      const std::vector<GaussianIntegerVector>& a_rows,
                      const PowerAllocation& p, SuccRateMode mode,
                      const std::vector<double>* step_noises_override = nullptr);

}  // namespace ecf
