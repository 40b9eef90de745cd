// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "supereig/assembly.hpp"

namespace supereig {

/// k smallest eigenpairs of A x = lambda M x, ascending. Eigenvectors are
/// columns, M-orthonormal, with the largest-magnitude coefficient positive
/// (ties broken by the lowest index).
struct EigenResult {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd residuals;  // ||A x - lambda M x|| / ||lambda M x||
};

EigenResult solve_evp(const SparseSystem& a, const SparseSystem& m, int k);

FEFunction solve_source(const Triangulation& t, const DofMap& dm, const ScalarField& f);

struct RTSolution {
  DofMap rt_map;
  DofMap p0_map;
  Eigen::VectorXd sigma;
  Eigen::VectorXd u;

  FEFunction flux(const Triangulation& t) const { return {t, rt_map, sigma}; }
  FEFunction potential(const Triangulation& t) const { return {t, p0_map, u}; }
};

/// Direct solve of the mixed saddle system assembled from f. Note the sign
/// convention of the primal relation: for an eigenpair (lambda, u) the flux
/// approximating the gradient of u is obtained with load -lambda u.
RTSolution solve_rt_source(const Triangulation& t, const ScalarField& f);

}  // namespace supereig
