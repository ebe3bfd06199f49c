#pragma once

#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "spacetime/architecture.hpp"
#include "spacetime/gates.hpp"

namespace spacetime {

using SparseC = Eigen::SparseMatrix<cplx>;
using SparseD = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<cplx>;

inline SparseC sparse_from_triplets(std::int64_t dim, const std::vector<Triplet>& ts) {
  SparseC m(dim, dim);
  m.setFromTriplets(ts.begin(), ts.end());
  m.makeCompressed();
  return m;
}

inline double hermiticity_defect(const SparseC& m) {
  SparseC d = SparseC(m.adjoint()) - m;
  d.makeCompressed();
  double defect = 0.0;
  for (int k = 0; k < d.nonZeros(); ++k) defect = std::max(defect, std::abs(d.valuePtr()[k]));
  return defect;
}

/// Ascending eigenvalues of a dense Hermitian matrix (deterministic).
inline Eigen::VectorXd dense_eigenvalues(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

inline Eigen::VectorXd dense_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

struct LanczosResult {
  std::vector<double> values;  // converged extremal eigenvalues
  std::vector<Vec> vectors;
  int iterations = 0;
  double residual = 0.0;
};

/// Deterministic Lanczos with full reorthogonalization and sequential
/// deflation; finds the k lowest (or highest) eigenvalues of a Hermitian
/// operator given as a matvec.  The start vector is produced by a fixed-seed
/// generator, so repeated runs are bit-stable.
inline LanczosResult lanczos_extremal(
    const std::function<void(const Vec&, Vec&)>& apply, std::int64_t dim, int k,
    bool lowest = true, double tol = 1e-10, int max_iter = 400,
    const std::vector<Vec>& deflate = {}) {
  LanczosResult result;
  Mat locked(dim, k + static_cast<int>(deflate.size()));
  int locked_cols = 0;
  for (const auto& d : deflate) locked.col(locked_cols++) = d;
  Rng rng(0x5eedULL);

  // blocked Gram-Schmidt pass, repeated only when cancellation ate the vector
  auto project_out = [&](Vec& v, const Mat& basis, int cols) {
    if (cols == 0) return;
    const double before = v.norm();
    auto b = basis.leftCols(cols);
    v.noalias() -= b * (b.adjoint() * v).eval();
    if (v.norm() < 0.7071 * before) v.noalias() -= b * (b.adjoint() * v).eval();
  };

  const int cap = static_cast<int>(std::min<std::int64_t>(max_iter + 1, dim + 1));
  Mat basis(dim, cap);
  for (int found = 0; found < k; ++found) {
    Vec v(dim);
    for (std::int64_t i = 0; i < dim; ++i) v(i) = cplx(rng.gaussian(), rng.gaussian());
    project_out(v, locked, locked_cols);
    if (v.norm() < 1e-14) fail(Error::Kind::numeric, "deflated space exhausts the operator");
    v.normalize();

    basis.col(0) = v;
    int cols = 1;
    std::vector<double> alpha, beta;
    Vec w(dim);
    double resid = 1.0;
    Eigen::VectorXd ritz;
    Eigen::MatrixXd tvecs;
    int m = 0;
    for (m = 1; m <= max_iter && static_cast<std::int64_t>(m) <= dim; ++m) {
      apply(basis.col(cols - 1), w);
      if (!beta.empty()) w -= beta.back() * basis.col(cols - 2);
      const double a = std::real(basis.col(cols - 1).dot(w));
      alpha.push_back(a);
      w -= a * basis.col(cols - 1);
      project_out(w, locked, locked_cols);
      project_out(w, basis, cols);
      const double b = w.norm();

      // Ritz values of the tridiagonal, checked on a small cadence
      if (m % 4 == 0 || b < 1e-14 || m == max_iter ||
          static_cast<std::int64_t>(m) == dim) {
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
          t(i, i) = alpha[i];
          if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        ritz = es.eigenvalues();
        tvecs = es.eigenvectors();
        const int target = lowest ? 0 : m - 1;
        resid = b * std::abs(tvecs(m - 1, target));
        if (resid < tol || b < 1e-14) break;
      }

      beta.push_back(b);
      if (cols < cap) basis.col(cols) = w / b;
      ++cols;
    }
    m = static_cast<int>(alpha.size());
    const int target = lowest ? 0 : m - 1;
    Vec y = Vec::Zero(dim);
    for (int i = 0; i < m && i < cap; ++i) y += tvecs(i, target) * basis.col(i);
    y.normalize();
    result.values.push_back(ritz(target));
    result.vectors.push_back(y);
    result.iterations += m;
    result.residual = std::max(result.residual, resid);
    locked.col(locked_cols++) = y;
  }
  return result;
}

inline LanczosResult lanczos_extremal(const SparseC& h, int k, bool lowest = true,
                                      double tol = 1e-10, int max_iter = 400,
                                      const std::vector<Vec>& deflate = {}) {
  return lanczos_extremal([&](const Vec& x, Vec& y) { y.noalias() = h * x; }, h.rows(), k,
                          lowest, tol, max_iter, deflate);
}

}  // namespace spacetime
