// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

#include "ecf/types.hpp"

namespace ecf {

// AP/UE layout on a wrap-around square.
struct NetworkGeometry {
  MatrixXd ap_positions;  // M x 2, meters
  MatrixXd ue_positions;  // L x 2, meters
  double side = 0.0;      // square side, meters

  Eigen::Index num_aps() const { return ap_positions.rows(); }
  Eigen::Index num_ues() const { return ue_positions.rows(); }
};

// Linear-scale large-scale gains (pathloss + shadowing), M x L.
struct LargeScaleMap {
  MatrixXd beta;
};

// Small-scale realization on top of a LargeScaleMap. When noise_normalized,
// gains are divided by sqrt(noise power) once so every downstream formula
// works with unit noise.
struct ChannelRealization {
  MatrixXcd g;              // M x L, noise-normalized gains
  MatrixXd beta;            // the raw linear large-scale map it was drawn from
  double noise_power_watts = 1.0;
  bool noise_normalized = true;

  Eigen::Index num_aps() const { return g.rows(); }
  Eigen::Index num_ues() const { return g.cols(); }

  // E|g_ml|^2 in the same normalized units as g
  MatrixXd beta_normalized() const { return beta / noise_power_watts; }
};

NetworkGeometry place_uniform(int m_aps, int l_ues, double side, uint64_t seed);

double wrap_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double side);

// beta[dB] = -30.5 - 36.7 log10(max(d, d_min)/1m) + F,  F ~ N(0, shadow_sd_db^2)
LargeScaleMap large_scale(const NetworkGeometry& geom, double shadow_sd_db, double d_min,
                          uint64_t seed);

ChannelRealization draw_channel(const LargeScaleMap& lsmap, double noise_power_dbw,
                                uint64_t seed);

}  // namespace ecf
