// SPDX-License-Identifier: Apache-2.0

#include "supereig/solver.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "supereig/error.hpp"

namespace supereig {

namespace {

constexpr int kDenseCutoff = 256;
constexpr int kMaxIterations = 500;
constexpr double kResidualTol = 1e-10;

void fix_signs(Eigen::MatrixXd& v) {
  for (int j = 0; j < v.cols(); ++j) {
    int arg = 0;
    double best = -1.0;
    for (int i = 0; i < v.rows(); ++i)
      if (std::abs(v(i, j)) > best) {
        best = std::abs(v(i, j));
        arg = i;
      }
    if (v(arg, j) < 0.0) v.col(j) = -v.col(j);
  }
}

Eigen::VectorXd relative_residuals(const Eigen::SparseMatrix<double>& a,
                                   const Eigen::SparseMatrix<double>& m,
                                   const Eigen::VectorXd& lambdas, const Eigen::MatrixXd& v) {
  Eigen::VectorXd r(lambdas.size());
  for (int j = 0; j < lambdas.size(); ++j) {
    const Eigen::VectorXd mu = m * v.col(j);
    r[j] = (a * v.col(j) - lambdas[j] * mu).norm() / (lambdas[j] * mu).norm();
  }
  return r;
}

// Modified Gram-Schmidt in the M inner product.
void m_orthonormalize(const Eigen::SparseMatrix<double>& m, Eigen::MatrixXd& x) {
  for (int j = 0; j < x.cols(); ++j) {
    for (int i = 0; i < j; ++i) {
      const double proj = x.col(i).dot(m * x.col(j));
      x.col(j) -= proj * x.col(i);
    }
    const double norm = std::sqrt(x.col(j).dot(m * x.col(j)));
    if (!(norm > 1e-14)) throw Error("solve_evp: degenerate iteration basis");
    x.col(j) /= norm;
  }
}

EigenResult dense_evp(const SparseSystem& a, const SparseSystem& m, int k) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(a.matrix),
                                                               Eigen::MatrixXd(m.matrix));
  if (es.info() != Eigen::Success) throw Error("solve_evp: dense eigensolve failed");
  EigenResult out;
  out.lambdas = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  fix_signs(out.vectors);
  out.residuals = relative_residuals(a.matrix, m.matrix, out.lambdas, out.vectors);
  return out;
}

}  // namespace

EigenResult solve_evp(const SparseSystem& a, const SparseSystem& m, int k) {
  const int n = a.dim;
  if (k < 1 || k > n) throw Error("solve_evp: invalid eigenpair count");
  if (m.dim != n) throw Error("solve_evp: dimension mismatch");
  if (n <= kDenseCutoff) return dense_evp(a, m, k);

  // Shift-invert (shift 0) block subspace iteration with Rayleigh-Ritz.
  const int block = std::min(n, std::max(2 * k, k + 8));
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.matrix);
  if (ldlt.info() != Eigen::Success) throw Error("solve_evp: stiffness factorization failed");

  Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, block);
  m_orthonormalize(m.matrix, x);
  EigenResult out;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    Eigen::MatrixXd y = ldlt.solve(m.matrix * x);
    m_orthonormalize(m.matrix, y);
    const Eigen::MatrixXd ar = y.transpose() * (a.matrix * y);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rr(0.5 * (ar + ar.transpose()));
    x = y * rr.eigenvectors();
    out.lambdas = rr.eigenvalues().head(k);
    out.vectors = x.leftCols(k);
    out.residuals = relative_residuals(a.matrix, m.matrix, out.lambdas, out.vectors);
    if (out.residuals.maxCoeff() <= kResidualTol) {
      fix_signs(out.vectors);
      return out;
    }
  }
  throw Error("solve_evp: no convergence after iteration budget, worst residual " +
              std::to_string(out.residuals.maxCoeff()));
}

FEFunction solve_source(const Triangulation& t, const DofMap& dm, const ScalarField& f) {
  const SparseSystem a = assemble_stiffness(t, dm);
  const Eigen::VectorXd b = assemble_load(t, dm, f);
  if (dm.n_free == 0) return FEFunction(t, dm, Eigen::VectorXd());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a.matrix);
  if (ldlt.info() != Eigen::Success) throw Error("solve_source: factorization failed");
  const Eigen::VectorXd x = ldlt.solve(b);
  const double scale = b.norm() + x.norm();
  if (scale > 0.0 && (a.matrix * x - b).norm() > 1e-12 * std::max(1.0, scale))
    throw Error("solve_source: singular or ill-conditioned system");
  return FEFunction(t, dm, x);
}

RTSolution solve_rt_source(const Triangulation& t, const ScalarField& f) {
  const RTSaddle saddle = assemble_rt_saddle(t, f);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(saddle.system.matrix);
  if (lu.info() != Eigen::Success) throw Error("solve_rt_source: factorization failed");
  const Eigen::VectorXd x = lu.solve(saddle.system.rhs);
  const double rhs_norm = saddle.system.rhs.norm();
  if ((saddle.system.matrix * x - saddle.system.rhs).norm() > 1e-10 * std::max(1.0, rhs_norm))
    throw Error("solve_rt_source: residual too large");
  RTSolution sol;
  sol.rt_map = build_dofmap(t, ElementKind::RT0, {});
  sol.p0_map = build_dofmap(t, ElementKind::P0, {});
  sol.sigma = x.head(saddle.n_flux);
  sol.u = x.tail(saddle.n_cell);
  return sol;
}

}  // namespace supereig
