// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <map>

#include "supereig/mesh.hpp"

namespace supereig {

enum class ElementKind { CR, ECR, P1, RT0, P0 };

ElementKind parse_element_kind(const std::string& name);
std::string to_string(ElementKind kind);

enum class BCType { Dirichlet, Neumann };

/// Boundary condition per boundary-segment label. Dirichlet entities are
/// removed from the space; Neumann is the natural condition and keeps them.
struct BoundaryConditions {
  std::map<int, BCType> by_label;

  static BoundaryConditions all_dirichlet(const DomainSpec& spec);
  static BoundaryConditions all_neumann(const DomainSpec& spec);
  BCType at(int label) const;
};

struct DofMap {
  ElementKind kind = ElementKind::CR;
  // Global free index per entity, -1 where constrained or unused by the kind.
  std::vector<int> edge_dof;
  std::vector<int> vertex_dof;
  std::vector<int> element_dof;
  int n_free = 0;
  int n_constrained = 0;
};

DofMap build_dofmap(const Triangulation& t, ElementKind kind, const BoundaryConditions& bc);

class FEFunction {
 public:
  FEFunction() = default;
  FEFunction(const Triangulation& t, const DofMap& dm, Eigen::VectorXd coeffs);

  ElementKind kind() const { return dofmap_->kind; }
  const Triangulation& mesh() const { return *mesh_; }
  const DofMap& dofmap() const { return *dofmap_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  Eigen::VectorXd& coeffs() { return coeffs_; }

  // Scalar kinds (CR, ECR, P1, P0). Throws for RT0.
  double value(int k, const Vec2& x) const;
  Vec2 gradient(int k, const Vec2& x) const;
  // RT0 only.
  Vec2 vector_value(int k, const Vec2& x) const;
  double divergence(int k) const;

 private:
  const Triangulation* mesh_ = nullptr;
  const DofMap* dofmap_ = nullptr;
  Eigen::VectorXd coeffs_;

  void check_point(int k, const Vec2& x) const;
  Eigen::Vector4d local_coeffs(int k) const;  // padded with zeros
};

using ScalarField = std::function<double(const Vec2&)>;
using VectorField = std::function<Vec2(const Vec2&)>;

FEFunction canonical_interpolate(const Triangulation& t, const DofMap& dm, const ScalarField& f);
FEFunction canonical_interpolate(const Triangulation& t, const DofMap& dm, const VectorField& f);

/// Local shape functions of element k in the local DOF order of the kind
/// (edges opposite vertices 0..2, then the element mean DOF for ECR).
struct LocalShape {
  int n = 0;
  std::array<int, 4> global{};  // free DOF index or -1

  // Scalar kinds.
  Eigen::Vector4d values(const Vec2& x) const;
  std::array<Vec2, 4> gradients(const Vec2& x) const;
  // RT0.
  std::array<Vec2, 3> vector_values(const Vec2& x) const;
  std::array<double, 3> divergences() const;

  ElementKind kind;
  Vec2 p[3];            // element vertices
  Vec2 grad_lambda[3];  // barycentric gradients
  Vec2 centroid;
  double area = 0.0;
  std::array<double, 3> sign{};    // RT0 orientation factors
  std::array<double, 3> height{};  // heights onto edge i
  std::array<double, 3> edge_length{};
  Eigen::Matrix4d coef;  // ECR: monomial coefficients of the nodal basis, columns
};

LocalShape local_shape(const Triangulation& t, const DofMap& dm, int k);

/// Monomial coefficients (1, xi1, xi2, |xi|^2 centered at the centroid) of the
/// local ECR representation with the given local DOF values.
Eigen::Vector4d ecr_monomial_coeffs(const Triangulation& t, int k, const Eigen::Vector4d& dofs);

}  // namespace supereig
