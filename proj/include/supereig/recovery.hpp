// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "supereig/fespaces.hpp"

namespace supereig {

/// Field evaluable per element, as a gradient or RT0 flux is.
using ElementVectorField = std::function<Vec2(int k, const Vec2& x)>;

ElementVectorField broken_gradient_field(const FEFunction& u);
ElementVectorField rt_flux_field(const FEFunction& sigma);

/// Recovered gradient: one value per edge midpoint, interpolated as a pair of
/// CR component functions inside each element.
struct RecoveredGradient {
  const Triangulation* mesh = nullptr;
  std::vector<Vec2> midpoint;  // per edge

  Vec2 value(int k, const Vec2& x) const;
  /// Gradient of the recovery on element k; entry (i, j) is the x_j
  /// derivative of component i. Not symmetrized.
  Eigen::Matrix2d element_gradient(int k) const;
};

/// Midpoint-averaging recovery: interior midpoints get the mean of the two
/// element traces; a boundary midpoint m gets the extrapolation
/// 2 v(m') - v(m'') through the interior midpoints m', m'' whose
/// extrapolation point lies closest to m (exact collinear extrapolation on
/// uniform meshes).
RecoveredGradient recover_kh(const Triangulation& t, const ElementVectorField& q);

/// Nodal (vertex-based) gradient recovered from a P1 function by local
/// least-squares quadratic fits, interpolated linearly between vertices.
struct NodalGradient {
  const Triangulation* mesh = nullptr;
  std::vector<Vec2> values;  // per vertex
  int fallback_count = 0;    // patches where the fit was rank deficient

  Vec2 value(int k, const Vec2& x) const;
  Eigen::Matrix2d element_gradient(int k) const;
};

NodalGradient recover_ppr(const FEFunction& u_p1);

struct RayleighResult {
  DofMap p1_map;
  Eigen::VectorXd coeffs;
  double lambda = 0.0;

  FEFunction u(const Triangulation& t) const { return {t, p1_map, coeffs}; }
};

/// Average-projection of a mass-normalized CR eigenfunction onto conforming
/// P1: interior vertex values are the arithmetic mean of the CR traces from
/// all elements containing the vertex, Dirichlet vertices are zeroed, and the
/// result is renormalized. lambda is its Rayleigh quotient.
RayleighResult project_p1star(const FEFunction& u_cr);

std::vector<Eigen::Matrix2d> recovered_hessian(const RecoveredGradient& kq);

}  // namespace supereig
