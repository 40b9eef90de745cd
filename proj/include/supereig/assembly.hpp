// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include <Eigen/Sparse>

#include "supereig/fespaces.hpp"

namespace supereig {

struct SparseSystem {
  int dim = 0;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;  // empty unless the operation produces one
};

/// Broken stiffness matrix over free DOFs; Dirichlet DOFs eliminated by
/// omission. Kinds: CR, ECR, P1.
SparseSystem assemble_stiffness(const Triangulation& t, const DofMap& dm);

/// Mass matrix over free DOFs. The CR matrix is assembled with the
/// edge-midpoint rule (exact for quadratics), which makes it exactly diagonal.
SparseSystem assemble_mass(const Triangulation& t, const DofMap& dm);

Eigen::VectorXd assemble_load(const Triangulation& t, const DofMap& dm, const ScalarField& f);

/// Mixed Raviart-Thomas saddle system
///   [ M  -B^T ] [sigma]   [ 0 ]
///   [ B   0   ] [  u  ] = [ F ],   F_K = (f, 1)_K,
/// i.e. (sigma, tau) - (u, div tau) = 0 and (div sigma, v) = (f, v).
/// Unknown order: all edge fluxes, then all element values.
struct RTSaddle {
  SparseSystem system;
  int n_flux = 0;
  int n_cell = 0;
};

RTSaddle assemble_rt_saddle(const Triangulation& t, const ScalarField& f);

/// Coordinate text format, one "i j value" record per stored entry.
void write_matrix_coordinate(std::ostream& os, const SparseSystem& s);

}  // namespace supereig
