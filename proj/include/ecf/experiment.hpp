// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ecf/schemes.hpp"

namespace ecf {

struct Scenario {
  std::vector<int> m_sweep{100};
  int l = 10;
  double side_m = 1000.0;
  double pt_watts = 0.2;
  double noise_dbw = -130.0;
  double shadow_sd_db = 4.0;
  double d_min_m = 1.0;
  int trials = 200;
  uint64_t seed = 1;
  std::vector<std::string> schemes{"CF", "MRC", "PARA"};
  std::string ue_order = "hungarian";     // default for bare SUCC
  std::string succ_mode = "literal";      // or "conservative"
  int cap = 0;                            // max UEs per AP, 0 disables
  int prime = 257;
  int threads = 0;                        // 0 picks hardware concurrency
  bool timing = false;                    // measured wall_ms breaks bit determinism
  PowerSolveOptions solver;

  void validate() const;
  UeOrderStrategy default_order() const;
  SuccRateMode mode() const;
};

Scenario scenario_from_json(const nlohmann::json& j);

struct TrialRecord {
  std::string scheme;
  int m = 0;
  int l = 0;
  int trial = 0;
  uint64_t seed = 0;       // channel sub-seed shared by all schemes in the trial
  double sum_rate = 0.0;
  int fronthaul_symbols = 0;
  double wall_ms = 0.0;
  VectorXd per_ue_rates;
  bool solver_fallback = false;
  bool recoverable_all = true;
};

// Paired Monte-Carlo run: all schemes of a trial see the same realization.
// Records come back sorted by (m, trial, scheme position).
std::vector<TrialRecord> run_scenario(const Scenario& sc);

void write_csv(const std::vector<TrialRecord>& records, const Scenario& sc, std::ostream& os);

nlohmann::json summarize(const std::vector<TrialRecord>& records);

// channel sub-seed used for (m, trial); exposed so tests can rebuild
// realizations independently
uint64_t trial_channel_seed(uint64_t scenario_seed, int m, int trial);
uint64_t trial_solver_seed(uint64_t scenario_seed, int m, int trial);

}  // namespace ecf
