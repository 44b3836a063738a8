// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "ecf/types.hpp"

namespace ecf {

enum class FeasStatus { Feasible, Infeasible, Unknown };

struct FeasibilityOutcome {
  FeasStatus status = FeasStatus::Unknown;
  std::optional<PowerAllocation> witness;

  bool feasible() const { return status == FeasStatus::Feasible; }
};

struct PowerSolveOptions {
  int n_starts = 16;           // random simplex starts per feasibility call
  int max_linearizations = 50; // supporting-line updates per start
  int pocs_sweeps = 80;        // projection sweeps per linearized system
  int pgd_iters = 300;         // projected-gradient budget
  int r_steps = 40;            // Algorithm-1 r resolution
  int s_substeps = 4;          // s_step = r_step / s_substeps
  uint64_t seed = 0;
};

// Euclidean projection onto { p >= 0, sum p = total }.
VectorXd project_to_simplex(const VectorXd& v, double total);

// Scan range for the auxiliary variable r: since a^H P a is linear in p, the
// per-row simplex extremes are attained at vertices.
std::pair<double, double> r_bounds(const std::vector<GaussianIntegerVector>& a_rows,
                                   double p_total);

// One feasibility cell of the two-scalar search: find p on the simplex with
// a_m^H P a_m <= r and (1/2) p^T J_m p - s v_m^T p - s >= 0 for every row.
// Solved by iterated supporting-line linearization of the squared term from
// multiple random simplex starts. Unknown signals budget exhaustion only.
FeasibilityOutcome feasibility_point(double r, double s,
                                     const std::vector<GaussianIntegerVector>& a_rows,
                                     const std::vector<VectorXcd>& g_rows, double p_total,
                                     const PowerSolveOptions& opts);

// Independent re-check of the Eq.-(26)-style constraints; builds the J matrix
// entrywise on purpose so it shares no code with the solver path.
bool check_feasibility_witness(double r, double s,
                               const std::vector<GaussianIntegerVector>& a_rows,
                               const std::vector<VectorXcd>& g_rows, double p_total,
                               const VectorXd& p, double tol_abs);

struct ParallelPowerResult {
  PowerAllocation alloc;
  double t = 0.0;           // max_m effective noise achieved by alloc
  double nominal_t = 0.0;   // best r - s over feasible cells (inf if none)
  bool fallback_equal_power = false;
};

// Algorithm-1 style brute force on (r, s). The returned allocation is the
// best of all collected witnesses plus equal power, scored by the true
// min-max effective noise, so t is always reproducible from (alloc, g, a).
ParallelPowerResult optimize_parallel(const std::vector<GaussianIntegerVector>& a_rows,
                                      const std::vector<VectorXcd>& g_rows, double p_total,
                                      double r_step, double s_step,
                                      const PowerSolveOptions& opts);

// Spec defaults: r_step spans (r_max - r_min)/r_steps with a same-scale
// fallback when the objective is constant over the simplex.
std::pair<double, double> default_scan_steps(const std::vector<GaussianIntegerVector>& a_rows,
                                             double p_total, const PowerSolveOptions& opts);

// Local minimization of one row's effective noise over the simplex by
// multi-start projected gradient descent. Never returns a point worse than
// equal power.
std::pair<PowerAllocation, double> optimize_single_combination(const GaussianIntegerVector& a,
                                                               const VectorXcd& g,
                                                               double p_total,
                                                               const PowerSolveOptions& opts);

}  // namespace ecf
