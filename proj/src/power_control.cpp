// SPDX-License-Identifier: Apache-2.0
#include "ecf/power_control.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ecf/rate_core.hpp"
#include "ecf/rng.hpp"

namespace ecf {

namespace {

constexpr double kSnapFraction = 1e-12;  // p_l below this times Pt snaps to 0
constexpr uint64_t kFeasLabel = 0x66656173ULL;  // "feas"
constexpr uint64_t kPgdLabel = 0x70676420ULL;   // "pgd"

struct RowData {
  // per row m: c = |a_ml|^2, v = |g_ml|^2, w = |a_ml||g_ml|
  MatrixXd c;
  MatrixXd v;
  MatrixXd w;
  VectorXd c_norm2;
  Eigen::Index rows = 0;
  Eigen::Index l = 0;
};

RowData build_rows(const std::vector<GaussianIntegerVector>& a_rows,
                   const std::vector<VectorXcd>& g_rows) {
  if (a_rows.size() != g_rows.size() || a_rows.empty()) {
    throw std::invalid_argument("power_control: row count mismatch or empty");
  }
  RowData d;
  d.rows = static_cast<Eigen::Index>(a_rows.size());
  d.l = a_rows[0].size();
  d.c.resize(d.rows, d.l);
  d.v.resize(d.rows, d.l);
  d.w.resize(d.rows, d.l);
  for (Eigen::Index m = 0; m < d.rows; ++m) {
    const auto& a = a_rows[static_cast<size_t>(m)];
    const auto& g = g_rows[static_cast<size_t>(m)];
    if (a.size() != d.l || g.size() != d.l) {
      throw std::invalid_argument("power_control: inconsistent vector lengths");
    }
    for (Eigen::Index l = 0; l < d.l; ++l) {
      const double a2 = a.abs2(l);
      const double g2 = std::norm(g[l]);
      d.c(m, l) = a2;
      d.v(m, l) = g2;
      d.w(m, l) = std::sqrt(a2 * g2);
    }
  }
  d.c_norm2 = d.c.rowwise().squaredNorm();
  return d;
}

// max violation of the true cell constraints at p (simplex assumed exact)
double cell_violation(const RowData& d, double r, double s, const VectorXd& p) {
  double worst = 0.0;
  for (Eigen::Index m = 0; m < d.rows; ++m) {
    worst = std::max(worst, d.c.row(m).dot(p) - r);
    const double wp = d.w.row(m).dot(p);
    const double need = s * (1.0 + d.v.row(m).dot(p));
    worst = std::max(worst, need - wp * wp);
  }
  return worst;
}

void snap_small(VectorXd& p, double total) {
  bool snapped = false;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] < kSnapFraction * total) {
      p[i] = 0.0;
      snapped = true;
    }
  }
  const double sum = p.sum();
  if (snapped && sum > 0.0) p *= total / sum;
}

VectorXd random_simplex_point(Rng& rng, Eigen::Index l, double total) {
  VectorXd p(l);
  for (Eigen::Index i = 0; i < l; ++i) {
    double u;
    do {
      u = rng.uniform();
    } while (u <= 0.0);
    p[i] = -std::log(u);
  }
  p *= total / p.sum();
  return p;
}

// POCS on { simplex } ∩ { c_m p <= r } ∩ { d_j p >= e_j }; returns final
// max violation of those linear constraints.
double pocs_linear(const RowData& d, double r, double p_total, const MatrixXd& dmat,
                   const VectorXd& evec, const VectorXd& d_norm2, VectorXd& p, int sweeps,
                   double tol) {
  double best = std::numeric_limits<double>::infinity();
  int since_improve = 0;
  for (int it = 0; it < sweeps; ++it) {
    for (Eigen::Index m = 0; m < d.rows; ++m) {
      const double viol = d.c.row(m).dot(p) - r;
      if (viol > 0.0 && d.c_norm2[m] > 0.0) p -= (viol / d.c_norm2[m]) * d.c.row(m).transpose();
    }
    for (Eigen::Index j = 0; j < dmat.rows(); ++j) {
      if (d_norm2[j] <= 0.0) continue;
      const double gap = evec[j] - dmat.row(j).dot(p);
      if (gap > 0.0) p += (gap / d_norm2[j]) * dmat.row(j).transpose();
    }
    p = project_to_simplex(p, p_total);
    double worst = 0.0;
    for (Eigen::Index m = 0; m < d.rows; ++m) {
      worst = std::max(worst, d.c.row(m).dot(p) - r);
    }
    for (Eigen::Index j = 0; j < dmat.rows(); ++j) {
      worst = std::max(worst, evec[j] - dmat.row(j).dot(p));
    }
    if (worst <= tol) return worst;
    if (worst < best * (1.0 - 1e-3)) {
      best = worst;
      since_improve = 0;
    } else if (++since_improve >= 12) {
      return worst;
    }
  }
  return best;
}

}  // namespace

VectorXd project_to_simplex(const VectorXd& v, double total) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cum = 0.0, tau = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum += u[static_cast<size_t>(i)];
    const double t = (cum - total) / static_cast<double>(i + 1);
    if (u[static_cast<size_t>(i)] - t > 0.0) tau = t;
  }
  return (v.array() - tau).max(0.0);
}

std::pair<double, double> r_bounds(const std::vector<GaussianIntegerVector>& a_rows,
                                   double p_total) {
  if (a_rows.empty()) throw std::invalid_argument("r_bounds: no rows");
  double r_max = 0.0;
  double r_min = 0.0;
  bool any_nonzero = false;
  for (const auto& a : a_rows) {
    double row_max = 0.0;
    double row_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index l = 0; l < a.size(); ++l) {
      const double a2 = a.abs2(l);
      row_max = std::max(row_max, a2);
      row_min = std::min(row_min, a2);
    }
    if (row_max > 0.0) any_nonzero = true;
    r_max = std::max(r_max, p_total * row_max);
    r_min = std::max(r_min, p_total * row_min);
  }
  if (!any_nonzero) throw std::invalid_argument("r_bounds: all coefficient rows are zero");
  return {r_min, r_max};
}

namespace {

// Sound upper bound on any feasible s given the r cap: from Cauchy-Schwarz,
// (w^T p)^2 <= (c^T p)(v^T p) <= r * v^T p, and v^T p <= Pt max_l v.
double analytic_s_bound(const RowData& d, double r, double p_total) {
  double bound = std::numeric_limits<double>::infinity();
  for (Eigen::Index m = 0; m < d.rows; ++m) {
    const double w_max = d.w.row(m).maxCoeff();
    const double v_max = d.v.row(m).maxCoeff();
    const double by_w = (p_total * w_max) * (p_total * w_max);
    const double vv = p_total * v_max;
    const double by_r = r * vv / (1.0 + vv);
    bound = std::min(bound, std::min(by_w, by_r));
  }
  return bound;
}

FeasibilityOutcome solve_cell(const RowData& d, double r, double s, double p_total,
                              const PowerSolveOptions& opts, uint64_t cell_seed) {
  FeasibilityOutcome out;

  const double scale = std::max({1.0, std::abs(r), std::abs(s)});
  const double accept_tol = 1e-9 * scale;
  const double lin_tol = 1e-11 * scale;

  if (s > analytic_s_bound(d, r, p_total) * (1.0 + 1e-9) + 1e-300) {
    out.status = FeasStatus::Infeasible;
    return out;
  }

  // one-dimensional simplex is a single point; decide exactly
  if (d.l == 1) {
    VectorXd p(1);
    p[0] = p_total;
    if (cell_violation(d, r, s, p) <= accept_tol) {
      out.status = FeasStatus::Feasible;
      out.witness = PowerAllocation(p, p_total);
    } else {
      out.status = FeasStatus::Infeasible;
    }
    return out;
  }

  MatrixXd dmat(d.rows, d.l);
  VectorXd evec(d.rows), d_norm2(d.rows);

  const int total_starts = opts.n_starts + 1;  // equal power first, then random
  for (int start = 0; start < total_starts; ++start) {
    VectorXd p;
    if (start == 0) {
      p = VectorXd::Constant(d.l, p_total / static_cast<double>(d.l));
    } else {
      Rng rng(cell_seed, static_cast<uint64_t>(start));
      p = random_simplex_point(rng, d.l, p_total);
    }

    for (int it = 0; it < opts.max_linearizations; ++it) {
      if (cell_violation(d, r, s, p) <= accept_tol) {
        VectorXd w = p;
        snap_small(w, p_total);
        if (cell_violation(d, r, s, w) > accept_tol) w = p;
        out.status = FeasStatus::Feasible;
        out.witness = PowerAllocation(std::move(w), p_total);
        return out;
      }
      // supporting line of the square at the current point:
      // (w^T p)^2 >= 2 x0 (w^T p) - x0^2, so require
      // (2 x0 w - s v)^T p >= s + x0^2
      bool degenerate = false;
      for (Eigen::Index m = 0; m < d.rows; ++m) {
        const double x0 = d.w.row(m).dot(p);
        dmat.row(m) = 2.0 * x0 * d.w.row(m) - s * d.v.row(m);
        evec[m] = s + x0 * x0;
        d_norm2[m] = dmat.row(m).squaredNorm();
        if (d_norm2[m] <= 0.0 && evec[m] > lin_tol) degenerate = true;
      }
      if (degenerate) break;

      const VectorXd prev = p;
      const double lin_viol =
          pocs_linear(d, r, p_total, dmat, evec, d_norm2, p, opts.pocs_sweeps, lin_tol);
      if (lin_viol > 1e3 * lin_tol && (p - prev).norm() <= 1e-13 * p_total) break;
      if ((p - prev).norm() <= 1e-14 * p_total && it > 0) break;
    }
    if (cell_violation(d, r, s, p) <= accept_tol) {
      VectorXd w = p;
      snap_small(w, p_total);
      if (cell_violation(d, r, s, w) > accept_tol) w = p;
      out.status = FeasStatus::Feasible;
      out.witness = PowerAllocation(std::move(w), p_total);
      return out;
    }
  }

  out.status = FeasStatus::Unknown;
  return out;
}

bool r_set_reachable(const RowData& d, double r, double p_total, int sweeps) {
  VectorXd p = VectorXd::Constant(d.l, p_total / static_cast<double>(d.l));
  const double tol = 1e-11 * std::max(1.0, r);
  for (int it = 0; it < sweeps; ++it) {
    double worst = 0.0;
    for (Eigen::Index m = 0; m < d.rows; ++m) {
      worst = std::max(worst, d.c.row(m).dot(p) - r);
    }
    if (worst <= tol) return true;
    for (Eigen::Index m = 0; m < d.rows; ++m) {
      const double viol = d.c.row(m).dot(p) - r;
      if (viol > 0.0 && d.c_norm2[m] > 0.0) p -= (viol / d.c_norm2[m]) * d.c.row(m).transpose();
    }
    p = project_to_simplex(p, p_total);
  }
  double worst = 0.0;
  for (Eigen::Index m = 0; m < d.rows; ++m) {
    worst = std::max(worst, d.c.row(m).dot(p) - r);
  }
  return worst <= tol;
}

}  // namespace

FeasibilityOutcome feasibility_point(double r, double s,
                                     const std::vector<GaussianIntegerVector>& a_rows,
                                     const std::vector<VectorXcd>& g_rows, double p_total,
                                     const PowerSolveOptions& opts) {
  if (r < 0.0 || s < 0.0) throw std::invalid_argument("feasibility_point: need r, s >= 0");
  const RowData d = build_rows(a_rows, g_rows);
  const uint64_t cell_seed = Rng::derive(
      opts.seed, {kFeasLabel, std::bit_cast<uint64_t>(r), std::bit_cast<uint64_t>(s)});
  return solve_cell(d, r, s, p_total, opts, cell_seed);
}

bool check_feasibility_witness(double r, double s,
                               const std::vector<GaussianIntegerVector>& a_rows,
                               const std::vector<VectorXcd>& g_rows, double p_total,
                               const VectorXd& p, double tol_abs) {
  const Eigen::Index l = p.size();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l; ++i) {
    if (p[i] < -tol_abs) return false;
    sum += p[i];
  }
  if (std::abs(sum - p_total) > tol_abs * std::max(1.0, p_total)) return false;

  for (size_t m = 0; m < a_rows.size(); ++m) {
    double apa = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) apa += a_rows[m].abs2(i) * p[i];
    if (apa > r + tol_abs) return false;

    double quad = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) {
      const double wi = std::sqrt(a_rows[m].abs2(i)) * std::abs(g_rows[m][i]);
      for (Eigen::Index j = 0; j < l; ++j) {
        const double wj = std::sqrt(a_rows[m].abs2(j)) * std::abs(g_rows[m][j]);
        quad += 2.0 * wi * wj * p[i] * p[j];
      }
    }
    double vp = 0.0;
    for (Eigen::Index i = 0; i < l; ++i) vp += std::norm(g_rows[m][i]) * p[i];
    if (0.5 * quad - s * vp - s < -tol_abs) return false;
  }
  return true;
}

std::pair<double, double> default_scan_steps(const std::vector<GaussianIntegerVector>& a_rows,
                                             double p_total, const PowerSolveOptions& opts) {
  const auto [r_min, r_max] = r_bounds(a_rows, p_total);
  const double span = r_max - r_min;
  const double base = span > 0.0 ? span : r_max;
  const double r_step = base / static_cast<double>(std::max(1, opts.r_steps));
  const double s_step = r_step / static_cast<double>(std::max(1, opts.s_substeps));
  return {r_step, s_step};
}

ParallelPowerResult optimize_parallel(const std::vector<GaussianIntegerVector>& a_rows,
                                      const std::vector<VectorXcd>& g_rows, double p_total,
                                      double r_step, double s_step,
                                      const PowerSolveOptions& opts) {
  if (r_step <= 0.0 || s_step <= 0.0) {
    throw std::invalid_argument("optimize_parallel: step sizes must be positive");
  }
  const RowData d = build_rows(a_rows, g_rows);
  const auto [r_min, r_max] = r_bounds(a_rows, p_total);

  std::vector<PowerAllocation> witnesses;
  double nominal_t = std::numeric_limits<double>::infinity();

  for (int k = 0;; ++k) {
    const double r = r_max - static_cast<double>(k) * r_step;
    if (k > 0 && r <= r_min) break;
    if (r <= 0.0) break;

    if (!r_set_reachable(d, r, p_total, 300)) continue;

    for (int j = 1;; ++j) {
      const double s = r - static_cast<double>(j) * s_step;
      if (s < 0.0) break;
      const uint64_t cell_seed = Rng::derive(
          opts.seed, {kFeasLabel, std::bit_cast<uint64_t>(r), std::bit_cast<uint64_t>(s)});
      FeasibilityOutcome cell = solve_cell(d, r, s, p_total, opts, cell_seed);
      if (cell.feasible()) {
        nominal_t = std::min(nominal_t, r - s);
        witnesses.push_back(std::move(*cell.witness));
      }
    }
  }

  ParallelPowerResult res;
  res.nominal_t = nominal_t;
  res.fallback_equal_power = witnesses.empty();

  auto true_objective = [&](const VectorXd& p) {
    double worst = 0.0;
    for (size_t m = 0; m < a_rows.size(); ++m) {
      worst = std::max(worst, effective_noise_parallel(p, g_rows[m], a_rows[m]));
    }
    return worst;
  };

  PowerAllocation best = PowerAllocation::equal(d.l, p_total);
  double best_t = true_objective(best.p);
  for (const auto& w : witnesses) {
    const double t = true_objective(w.p);
    if (t < best_t) {
      best_t = t;
      best = w;
    }
  }
  res.alloc = std::move(best);
  res.t = best_t;
  return res;
}

std::pair<PowerAllocation, double> optimize_single_combination(const GaussianIntegerVector& a,
                                                               const VectorXcd& g,
                                                               double p_total,
                                                               const PowerSolveOptions& opts) {
  if (a.is_zero()) throw std::invalid_argument("optimize_single_combination: zero coefficients");
  const Eigen::Index l = g.size();

  const VectorXd a2 = [&] {
    VectorXd out(l);
    for (Eigen::Index i = 0; i < l; ++i) out[i] = a.abs2(i);
    return out;
  }();
  const VectorXd g2 = g.array().abs2();
  const VectorXcd ag = [&] {
    VectorXcd out(l);
    for (Eigen::Index i = 0; i < l; ++i) out[i] = std::conj(cplx(a.re[i], a.im[i])) * g[i];
    return out;
  }();

  auto value = [&](const VectorXd& p) {
    const cplx u = (ag.array() * p.array().cast<cplx>()).sum();
    const double den = 1.0 + g2.dot(p);
    return a2.dot(p) - std::norm(u) / den;
  };
  auto gradient = [&](const VectorXd& p, VectorXd& grad) {
    const cplx u = (ag.array() * p.array().cast<cplx>()).sum();
    const double den = 1.0 + g2.dot(p);
    const double u2 = std::norm(u);
    for (Eigen::Index i = 0; i < l; ++i) {
      const double dnum = 2.0 * std::real(std::conj(u) * ag[i]);
      grad[i] = a2[i] - (dnum * den - u2 * g2[i]) / (den * den);
    }
  };

  const VectorXd equal = VectorXd::Constant(l, p_total / static_cast<double>(l));
  VectorXd best_p = equal;
  double best_f = value(equal);

  const uint64_t seed = Rng::derive(opts.seed, {kPgdLabel});
  VectorXd grad(l);
  for (int start = 0; start < opts.n_starts; ++start) {
    VectorXd p;
    if (start == 0) {
      p = equal;
    } else {
      Rng rng(seed, static_cast<uint64_t>(start));
      p = random_simplex_point(rng, l, p_total);
    }
    double f = value(p);
    double eta = p_total;
    for (int it = 0; it < opts.pgd_iters; ++it) {
      gradient(p, grad);
      bool moved = false;
      while (eta > 1e-18 * p_total) {
        VectorXd cand = project_to_simplex(p - eta * grad, p_total);
        const double fc = value(cand);
        if (fc < f - 1e-15 * std::max(1.0, std::abs(f))) {
          const double step = (cand - p).norm();
          p = std::move(cand);
          f = fc;
          eta *= 1.5;
          moved = true;
          if (step <= 1e-12 * p_total) it = opts.pgd_iters;  // converged
          break;
        }
        eta *= 0.5;
      }
      if (!moved) break;
    }
    VectorXd snapped = p;
    snap_small(snapped, p_total);
    const double fs = value(snapped);
    if (fs < best_f) {
      best_f = fs;
      best_p = snapped;
    }
    if (f < best_f) {
      best_f = f;
      best_p = p;
    }
  }
  return {PowerAllocation(best_p, p_total), best_f};
}

}  // namespace ecf
