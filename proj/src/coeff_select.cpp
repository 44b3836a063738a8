// SPDX-License-Identifier: Apache-2.0
#include "ecf/coeff_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ecf {

namespace {

// flip sign so the first nonzero entry is positive
void canonicalize(VectorXi& a) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != 0) {
      if (a[i] < 0) a = -a;
      return;
    }
  }
}

bool lex_less(const VectorXi& a, const VectorXi& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

// a^T P a - (a^T P g)^2 / (1 + g^T P g); the inversion-free form, valid with
// zero powers
double quad_objective(const VectorXd& p, const VectorXd& g, const VectorXd& a) {
  const double apa = (a.array().square() * p.array()).sum();
  const double apg = (a.array() * p.array() * g.array()).sum();
  const double gpg = (g.array().square() * p.array()).sum();
  return apa - apg * apg / (1.0 + gpg);
}

}  // namespace

std::atomic<uint64_t>& candidate_bound_cap_hits() {
  static std::atomic<uint64_t> hits{0};
  return hits;
}

std::pair<SignedPermutation, VectorXd> normalize_channel(const VectorXd& g_real) {
  const Eigen::Index n = g_real.size();
  SignedPermutation sp;
  sp.perm.resize(n);
  std::iota(sp.perm.begin(), sp.perm.end(), 0);
  std::stable_sort(sp.perm.begin(), sp.perm.end(), [&](int a, int b) {
    return std::abs(g_real[a]) < std::abs(g_real[b]);
  });
  sp.signs.resize(n);
  VectorXd sorted(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double v = g_real[sp.perm[j]];
    sp.signs[j] = v < 0.0 ? -1 : 1;
    sorted[j] = std::abs(v);
  }
  return {sp, sorted};
}

int candidate_bound(const VectorXd& p_diag, const VectorXd& g_sorted) {
  const double gpg = (g_sorted.array().square() * p_diag.array()).sum();
  const double lambda_max = 1.0 + gpg;
  if (lambda_max >= static_cast<double>(kCandidateBoundCap)) {
    candidate_bound_cap_hits().fetch_add(1, std::memory_order_relaxed);
    return kCandidateBoundCap;
  }
  return std::max(1, static_cast<int>(std::floor(lambda_max)));
}

double real_coeff_objective(const VectorXd& p_diag, const VectorXd& g_real, const VectorXi& a) {
  return quad_objective(p_diag, g_real, a.cast<double>());
}

VectorXi select_real_coeff(const VectorXd& p_diag, const VectorXd& g_real) {
  const Eigen::Index n = g_real.size();
  if (p_diag.size() != n) throw std::invalid_argument("select_real_coeff: size mismatch");
  if ((p_diag.array() > 0.0).count() == 0) {
    throw std::invalid_argument("select_real_coeff: need at least one positive power");
  }

  auto [sp, g_bar] = normalize_channel(g_real);
  VectorXd p_bar(n);
  for (Eigen::Index j = 0; j < n; ++j) p_bar[j] = p_diag[sp.perm[j]];

  // restrict to positive-power coordinates; excluded UEs keep coefficient 0
  std::vector<Eigen::Index> active;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (p_bar[j] > 0.0) active.push_back(j);
  }
  const Eigen::Index na = static_cast<Eigen::Index>(active.size());
  VectorXd pa(na), ga(na);
  for (Eigen::Index i = 0; i < na; ++i) {
    pa[i] = p_bar[active[i]];
    ga[i] = g_bar[active[i]];
  }

  std::vector<VectorXi> cands;
  for (Eigen::Index i = 0; i < na; ++i) {
    VectorXi e = VectorXi::Zero(na);
    e[i] = 1;
    cands.push_back(e);
    cands.push_back(-e);
  }

  if (na >= 2) {
    // G = (P^-1 + g g^T)^-1 via the rank-one update identity
    const double gpg = (ga.array().square() * pa.array()).sum();
    const VectorXd pg = pa.array() * ga.array();
    const MatrixXd gm = MatrixXd(pa.asDiagonal()) - pg * pg.transpose() / (1.0 + gpg);

    const MatrixXd gss = gm.topLeftCorner(na - 1, na - 1);
    const VectorXd gsl = gm.topRightCorner(na - 1, 1);
    const VectorXd r_base = -gss.ldlt().solve(gsl);
    if (r_base.allFinite()) {
      const int k_max = candidate_bound(pa, ga);
      for (int k = 1; k <= k_max; ++k) {
        VectorXi c(na);
        for (Eigen::Index i = 0; i + 1 < na; ++i) {
          c[i] = static_cast<int>(std::llround(k * r_base[i]));
        }
        c[na - 1] = k;
        cands.push_back(std::move(c));
      }
    }
  }

  double best_obj = std::numeric_limits<double>::infinity();
  for (auto& c : cands) {
    if (c.isZero()) continue;
    canonicalize(c);
    best_obj = std::min(best_obj, quad_objective(pa, ga, c.cast<double>()));
  }

  const double tie_eps = 1e-12 * std::max(std::abs(best_obj), 1e-30);
  VectorXi best;
  bool have = false;
  for (const auto& c : cands) {
    if (c.isZero()) continue;
    if (quad_objective(pa, ga, c.cast<double>()) > best_obj + tie_eps) continue;
    VectorXi full = VectorXi::Zero(n);
    for (Eigen::Index i = 0; i < na; ++i) full[active[i]] = c[i];
    VectorXi orig = sp.apply_inverse(full);
    canonicalize(orig);
    if (!have || lex_less(orig, best)) {
      best = orig;
      have = true;
    }
  }
  return best;
}

namespace {

// complex effective noise a^H P a - |a^H P g|^2 / (1 + g^H P g)
double complex_objective(const VectorXd& p, const VectorXcd& g, const GaussianIntegerVector& a) {
  double apa = 0.0, gpg = 0.0;
  cplx apg(0.0, 0.0);
  for (Eigen::Index l = 0; l < g.size(); ++l) {
    apa += a.abs2(l) * p[l];
    gpg += p[l] * std::norm(g[l]);
    apg += std::conj(cplx(a.re[l], a.im[l])) * p[l] * g[l];
  }
  return apa - std::norm(apg) / (1.0 + gpg);
}

void canonicalize_pair(GaussianIntegerVector& a) {
  for (Eigen::Index i = 0; i < 2 * a.size(); ++i) {
    const int v = i < a.size() ? a.re[i] : a.im[i - a.size()];
    if (v != 0) {
      if (v < 0) {
        a.re = -a.re;
        a.im = -a.im;
      }
      return;
    }
  }
}

bool lex_less_pair(const GaussianIntegerVector& a, const GaussianIntegerVector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.re[i] != b.re[i]) return a.re[i] < b.re[i];
  }
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a.im[i] != b.im[i]) return a.im[i] < b.im[i];
  }
  return false;
}

}  // namespace

GaussianIntegerVector select_coeff_complex(const VectorXd& p_diag, const VectorXcd& g_complex) {
  const Eigen::Index n = g_complex.size();
  if (p_diag.size() != n) throw std::invalid_argument("select_coeff_complex: size mismatch");
  if ((p_diag.array() > 0.0).count() == 0) {
    throw std::invalid_argument("select_coeff_complex: need at least one positive power");
  }

  const VectorXd gr = g_complex.real();
  const VectorXd gi = g_complex.imag();
  const bool re_zero = gr.isZero(0.0);
  const bool im_zero = gi.isZero(0.0);

  if (re_zero && im_zero) {
    // crafted degenerate input: no channel at all, fall back to the first
    // positive-power unit vector
    GaussianIntegerVector a(n);
    for (Eigen::Index l = 0; l < n; ++l) {
      if (p_diag[l] > 0.0) {
        a.re[l] = 1;
        break;
      }
    }
    return a;
  }

  GaussianIntegerVector combined(n);
  combined.re = re_zero ? VectorXi::Zero(n) : select_real_coeff(p_diag, gr);
  combined.im = im_zero ? VectorXi::Zero(n) : select_real_coeff(p_diag, gi);

  std::vector<GaussianIntegerVector> cands;
  cands.push_back(combined);
  if (!combined.re.isZero() && !combined.im.isZero()) {
    GaussianIntegerVector re_only(n), im_only(n);
    re_only.re = combined.re;
    im_only.im = combined.im;
    cands.push_back(re_only);
    cands.push_back(im_only);
  }
  for (Eigen::Index l = 0; l < n; ++l) {
    if (p_diag[l] <= 0.0) continue;
    GaussianIntegerVector er(n), ei(n);
    er.re[l] = 1;
    ei.im[l] = 1;
    cands.push_back(er);
    cands.push_back(ei);
  }

  double best_obj = std::numeric_limits<double>::infinity();
  for (auto& c : cands) {
    canonicalize_pair(c);
    best_obj = std::min(best_obj, complex_objective(p_diag, g_complex, c));
  }
  const double tie_eps = 1e-12 * std::max(std::abs(best_obj), 1e-30);
  const GaussianIntegerVector* best = nullptr;
  for (const auto& c : cands) {
    if (complex_objective(p_diag, g_complex, c) > best_obj + tie_eps) continue;
    if (best == nullptr || lex_less_pair(c, *best)) best = &c;
  }
  return *best;
}

VectorXi exhaustive_coeff_oracle(const VectorXd& p_diag, const VectorXd& g_real, int k_bound) {
  const Eigen::Index n = g_real.size();
  if (n > 4) throw std::invalid_argument("exhaustive_coeff_oracle: L must be <= 4");
  if (k_bound < 1) throw std::invalid_argument("exhaustive_coeff_oracle: bound must be >= 1");

  VectorXi best;
  double best_obj = std::numeric_limits<double>::infinity();
  VectorXi a = VectorXi::Constant(n, -k_bound);
  // zero-power coordinates stay pinned to zero
  for (Eigen::Index l = 0; l < n; ++l) {
    if (p_diag[l] <= 0.0) a[l] = 0;
  }
  const double tie_scale = 1e-12;
  while (true) {
    if (!a.isZero()) {
      VectorXd ad = a.cast<double>();
      const double apa = (ad.array().square() * p_diag.array()).sum();
      const double apg = (ad.array() * p_diag.array() * g_real.array()).sum();
      const double gpg = (g_real.array().square() * p_diag.array()).sum();
      const double obj = apa - apg * apg / (1.0 + gpg);
      const double eps = tie_scale * std::max(std::abs(best_obj), 1e-30);
      if (obj < best_obj - eps) {
        best = a;
        canonicalize(best);
        best_obj = obj;
      } else if (obj <= best_obj + eps) {
        VectorXi cand = a;
        canonicalize(cand);
        if (best.size() == 0 || lex_less(cand, best)) best = cand;
      }
    }
    // odometer over {-K..K}^n skipping zero-power coordinates
    Eigen::Index i = 0;
    while (i < n) {
      if (p_diag[i] <= 0.0) {
        ++i;
        continue;
      }
      if (a[i] < k_bound) {
        ++a[i];
        break;
      }
      a[i] = -k_bound;
      ++i;
    }
    if (i == n) break;
  }
  if (best.size() == 0) {
    throw std::invalid_argument("exhaustive_coeff_oracle: no nonzero candidate (all powers zero)");
  }
  return best;
}

}  // namespace ecf
