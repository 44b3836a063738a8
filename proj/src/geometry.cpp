// SPDX-License-Identifier: Apache-2.0
#include "ecf/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "ecf/rng.hpp"

namespace ecf {

NetworkGeometry place_uniform(int m_aps, int l_ues, double side, uint64_t seed) {
  if (l_ues < 1 || m_aps <= l_ues) {
    throw std::invalid_argument("place_uniform: need m_aps > l_ues >= 1");
  }
  if (side <= 0.0) throw std::invalid_argument("place_uniform: side must be positive");

  Rng rng(seed, streams::kPlacement);
  NetworkGeometry geom;
  geom.side = side;
  geom.ap_positions.resize(m_aps, 2);
  geom.ue_positions.resize(l_ues, 2);
  for (int m = 0; m < m_aps; ++m) {
    geom.ap_positions(m, 0) = rng.uniform() * side;
    geom.ap_positions(m, 1) = rng.uniform() * side;
  }
  for (int l = 0; l < l_ues; ++l) {
    geom.ue_positions(l, 0) = rng.uniform() * side;
    geom.ue_positions(l, 1) = rng.uniform() * side;
  }
  return geom;
}

double wrap_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& q, double side) {
  double acc = 0.0;
  for (int k = 0; k < 2; ++k) {
    double d = std::abs(p[k] - q[k]);
    d = std::min(d, side - d);
    acc += d * d;
  }
  return std::sqrt(acc);
}

LargeScaleMap large_scale(const NetworkGeometry& geom, double shadow_sd_db, double d_min,
                          uint64_t seed) {
  if (shadow_sd_db < 0.0) throw std::invalid_argument("large_scale: shadow sd must be >= 0");
  if (d_min <= 0.0) throw std::invalid_argument("large_scale: d_min must be positive");

  Rng rng(seed, streams::kShadowing);
  const Eigen::Index m_aps = geom.num_aps();
  const Eigen::Index l_ues = geom.num_ues();
  LargeScaleMap out;
  out.beta.resize(m_aps, l_ues);
  for (Eigen::Index m = 0; m < m_aps; ++m) {
    for (Eigen::Index l = 0; l < l_ues; ++l) {
      const double d = std::max(
          wrap_distance(geom.ap_positions.row(m), geom.ue_positions.row(l), geom.side), d_min);
      const double f = shadow_sd_db > 0.0 ? shadow_sd_db * rng.normal() : 0.0;
      const double beta_db = -30.5 - 36.7 * std::log10(d) + f;
      out.beta(m, l) = std::pow(10.0, beta_db / 10.0);
    }
  }
  return out;
}

ChannelRealization draw_channel(const LargeScaleMap& lsmap, double noise_power_dbw,
                                uint64_t seed) {
  Rng rng(seed, streams::kFastFading);
  const double sigma2 = std::pow(10.0, noise_power_dbw / 10.0);
  ChannelRealization ch;
  ch.beta = lsmap.beta;
  ch.noise_power_watts = sigma2;
  ch.noise_normalized = true;
  ch.g.resize(lsmap.beta.rows(), lsmap.beta.cols());
  for (Eigen::Index m = 0; m < ch.g.rows(); ++m) {
    for (Eigen::Index l = 0; l < ch.g.cols(); ++l) {
      ch.g(m, l) = std::sqrt(lsmap.beta(m, l) / sigma2) * rng.cnormal();
    }
  }
  return ch;
}

}  // namespace ecf
