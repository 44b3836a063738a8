// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "ecf/geometry.hpp"
#include "ecf/types.hpp"

namespace ecf {

// CF reference: equal transmit power, per-AP coefficient selection, greedy
// rank-L' selection of combinations for recovery, no power optimization.
// use_ap_selection picks the large-scale-fading scores; otherwise APs are
// ranked by their equal-power effective noise.
RateReport cf_equal_power(const MatrixXcd& g, const MatrixXd& beta, double p_total,
                          bool use_ap_selection);

// Maximum ratio combining across all APs:
// SINR_l = P_l ||g_l||^4 / (||g_l||^2 + sum_{l' != l} P_l' |g_l'^H g_l|^2)
RateReport mrc_sum_rate(const MatrixXcd& g, const PowerAllocation& p);

// R = min{R0, Rsum} under a fronthaul capacity cap
double capped_rate(double r_sum, double r0);

}  // namespace ecf
