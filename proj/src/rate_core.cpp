// SPDX-License-Identifier: Apache-2.0
#include "ecf/rate_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <cmath>
#include <stdexcept>

namespace ecf {

cplx mmse_factor(const VectorXd& p_diag, const VectorXcd& g, const GaussianIntegerVector& a) {
  cplx gpa(0.0, 0.0);
  double gpg = 0.0;
  for (Eigen::Index l = 0; l < g.size(); ++l) {
    gpa += std::conj(g[l]) * p_diag[l] * cplx(a.re[l], a.im[l]);
    gpg += p_diag[l] * std::norm(g[l]);
  }
  return gpa / (1.0 + gpg);
}

double effective_noise_parallel(const VectorXd& p_diag, const VectorXcd& g, const VectorXcd& a) {
  double apa = 0.0, gpg = 0.0;
  cplx apg(0.0, 0.0);
  for (Eigen::Index l = 0; l < g.size(); ++l) {
    apa += std::norm(a[l]) * p_diag[l];
    gpg += p_diag[l] * std::norm(g[l]);
    apg += std::conj(a[l]) * p_diag[l] * g[l];
  }
  return apa - std::norm(apg) / (1.0 + gpg);
}

double effective_noise_parallel(const VectorXd& p_diag, const VectorXcd& g,
                                const GaussianIntegerVector& a) {
  return effective_noise_parallel(p_diag, g, a.to_complex());
}

namespace {

// Hermitian square root of (P^-1 + g g^H)^-1 = P - P g g^H P / (1 + g^H P g).
// Any factor with F^H F equal to that matrix works; the symmetric root keeps
// the projector explicit.
MatrixXcd hermitian_sqrt_factor(const VectorXd& p_diag, const VectorXcd& g) {
  const Eigen::Index n = g.size();
  const VectorXcd pg = p_diag.array() * g.array();
  const double gpg = (p_diag.array() * g.array().abs2()).sum();
  MatrixXcd m = MatrixXcd::Zero(n, n);
  m.diagonal() = p_diag.cast<cplx>();
  m.noalias() -= pg * pg.adjoint() / (1.0 + gpg);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double effective_noise_successive(const VectorXd& p_diag, const VectorXcd& g,
                                  const VectorXcd& a, const std::vector<VectorXcd>& a_prev) {
  if (a_prev.empty()) return effective_noise_parallel(p_diag, g, a);

  const Eigen::Index n = g.size();
  const Eigen::Index k = static_cast<Eigen::Index>(a_prev.size());

  MatrixXcd side(n, k);
  for (Eigen::Index j = 0; j < k; ++j) side.col(j) = a_prev[j];
  {
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(side);
    qr.setThreshold(1e-9);
    if (qr.rank() < k) {
      throw std::invalid_argument(
          "effective_noise_successive: side-information vectors are linearly dependent");
    }
  }

  const MatrixXcd f = hermitian_sqrt_factor(p_diag, g);
  const MatrixXcd b = f * side;  // columns span the cancellable subspace
  const VectorXcd fa = f * a;

  // Project fa onto the orthogonal complement of range(b). Zero transmit
  // powers can collapse directions of b; the rank-revealing QR keeps the
  // projector well defined in that case.
  Eigen::ColPivHouseholderQR<MatrixXcd> qr(b);
  qr.setThreshold(1e-12);
  const Eigen::Index r = qr.rank();
  if (r == 0) return fa.squaredNorm();
  const MatrixXcd q = MatrixXcd(qr.householderQ()).leftCols(r);
  const VectorXcd resid = fa - q * (q.adjoint() * fa);
  return resid.squaredNorm();
}

RateReport ue_rates_parallel(const VectorXd& p_diag, const std::vector<VectorXcd>& g_rows,
                             const std::vector<GaussianIntegerVector>& a_rows) {
  if (g_rows.size() != a_rows.size()) {
    throw std::invalid_argument("ue_rates_parallel: row count mismatch");
  }
  const Eigen::Index l_ues = p_diag.size();
  const size_t rows = g_rows.size();

  RateReport rep;
  rep.effective_noises.resize(static_cast<Eigen::Index>(rows));
  for (size_t m = 0; m < rows; ++m) {
    rep.effective_noises[static_cast<Eigen::Index>(m)] =
        effective_noise_parallel(p_diag, g_rows[m], a_rows[m]);
  }

  rep.per_ue_rates = VectorXd::Zero(l_ues);
  for (Eigen::Index l = 0; l < l_ues; ++l) {
    double rate = -1.0;  // unserved marker
    for (size_t m = 0; m < rows; ++m) {
      if (!a_rows[m].nonzero_at(l)) continue;
      const double s2 = rep.effective_noises[static_cast<Eigen::Index>(m)];
      const double r = (p_diag[l] <= 0.0 || s2 <= 0.0) ? 0.0 : log2_pos(p_diag[l] / s2);
      rate = rate < 0.0 ? r : std::min(rate, r);
    }
    rep.per_ue_rates[l] = std::max(rate, 0.0);
  }
  rep.sum_rate = rep.per_ue_rates.sum();
  rep.fronthaul_symbols_per_use =
      fronthaul_load(ComputationScheme::Parallel, static_cast<int>(rows));
  return rep;
}

namespace {

int64_t mod_p(int64_t v, int64_t p) {
  const int64_t r = v % p;
  return r < 0 ? r + p : r;
}

int64_t mod_pow(int64_t base, int64_t exp, int64_t p) {
  int64_t acc = 1;
  base = mod_p(base, p);
  while (exp > 0) {
    if (exp & 1) acc = acc * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return acc;
}

int64_t mod_inv(int64_t v, int64_t p) { return mod_pow(v, p - 2, p); }

bool is_prime(int n) {
  if (n < 2) return false;
  for (int d = 2; static_cast<int64_t>(d) * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace

std::vector<bool> recoverable(const std::vector<GaussianIntegerVector>& a_rows, int prime_p) {
  if (!is_prime(prime_p)) throw std::invalid_argument("recoverable: modulus must be prime");
  if (a_rows.empty()) throw std::invalid_argument("recoverable: no coefficient vectors");

  const int64_t p = prime_p;
  const Eigen::Index l_ues = a_rows[0].size();
  const Eigen::Index rows = 2 * static_cast<Eigen::Index>(a_rows.size());
  const Eigen::Index cols = 2 * l_ues;

  // stacked [[Q^R, -Q^I], [Q^I, Q^R]] over Z_p
  Eigen::Matrix<int64_t, Eigen::Dynamic, Eigen::Dynamic> mat(rows, cols);
  for (size_t m = 0; m < a_rows.size(); ++m) {
    for (Eigen::Index l = 0; l < l_ues; ++l) {
      const int64_t qr = mod_p(a_rows[m].re[l], p);
      const int64_t qi = mod_p(a_rows[m].im[l], p);
      mat(static_cast<Eigen::Index>(m), l) = qr;
      mat(static_cast<Eigen::Index>(m), l_ues + l) = mod_p(-qi, p);
      mat(static_cast<Eigen::Index>(m) + rows / 2, l) = qi;
      mat(static_cast<Eigen::Index>(m) + rows / 2, l_ues + l) = qr;
    }
  }

  // row echelon form mod p with recorded pivot columns
  std::vector<Eigen::Index> pivot_col;
  Eigen::Index lead = 0;
  for (Eigen::Index col = 0; col < cols && lead < rows; ++col) {
    Eigen::Index sel = -1;
    for (Eigen::Index r = lead; r < rows; ++r) {
      if (mat(r, col) != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    mat.row(lead).swap(mat.row(sel));
    const int64_t inv = mod_inv(mat(lead, col), p);
    for (Eigen::Index c = col; c < cols; ++c) mat(lead, c) = mat(lead, c) * inv % p;
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r == lead || mat(r, col) == 0) continue;
      const int64_t factor = mat(r, col);
      for (Eigen::Index c = col; c < cols; ++c) {
        mat(r, c) = mod_p(mat(r, c) - factor * mat(lead, c), p);
      }
    }
    pivot_col.push_back(col);
    ++lead;
  }

  // delta_l is in the row space iff reducing it by the echelon rows leaves zero
  std::vector<bool> ok(static_cast<size_t>(l_ues));
  for (Eigen::Index l = 0; l < l_ues; ++l) {
    std::vector<int64_t> v(static_cast<size_t>(cols), 0);
    v[static_cast<size_t>(l)] = 1;
    for (size_t r = 0; r < pivot_col.size(); ++r) {
      const int64_t coef = v[static_cast<size_t>(pivot_col[r])];
      if (coef == 0) continue;
      for (Eigen::Index c = 0; c < cols; ++c) {
        v[static_cast<size_t>(c)] =
            mod_p(v[static_cast<size_t>(c)] - coef * mat(static_cast<Eigen::Index>(r), c), p);
      }
    }
    bool zero = true;
    for (int64_t x : v) zero = zero && x == 0;
    ok[static_cast<size_t>(l)] = zero;
  }
  return ok;
}

int fronthaul_load(ComputationScheme scheme, int m_selected) {
  if (m_selected < 1) throw std::invalid_argument("fronthaul_load: m_selected must be >= 1");
  return scheme == ComputationScheme::Parallel ? 2 * m_selected : 4 * m_selected;
}

}  // namespace ecf
