// SPDX-License-Identifier: Apache-2.0

#include "supereig/fespaces.hpp"

#include <cmath>

#include "supereig/error.hpp"
#include "supereig/quadrature.hpp"

namespace supereig {

ElementKind parse_element_kind(const std::string& name) {
  if (name == "cr") return ElementKind::CR;
  if (name == "ecr") return ElementKind::ECR;
  if (name == "p1") return ElementKind::P1;
  if (name == "rt0") return ElementKind::RT0;
  if (name == "p0") return ElementKind::P0;
  throw Error("unknown element kind: " + name);
}

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::CR: return "cr";
    case ElementKind::ECR: return "ecr";
    case ElementKind::P1: return "p1";
    case ElementKind::RT0: return "rt0";
    case ElementKind::P0: return "p0";
  }
  throw Error("invalid element kind");
}

BoundaryConditions BoundaryConditions::all_dirichlet(const DomainSpec& spec) {
  BoundaryConditions bc;
  for (const BoundarySegment& s : spec.segments) bc.by_label[s.label] = BCType::Dirichlet;
  return bc;
}

BoundaryConditions BoundaryConditions::all_neumann(const DomainSpec& spec) {
  BoundaryConditions bc;
  for (const BoundarySegment& s : spec.segments) bc.by_label[s.label] = BCType::Neumann;
  return bc;
}

BCType BoundaryConditions::at(int label) const {
  auto it = by_label.find(label);
  if (it == by_label.end())
    throw Error("boundary segment " + std::to_string(label) + " has no boundary condition");
  return it->second;
}

DofMap build_dofmap(const Triangulation& t, ElementKind kind, const BoundaryConditions& bc) {
  DofMap dm;
  dm.kind = kind;
  const bool uses_bc = kind == ElementKind::CR || kind == ElementKind::ECR || kind == ElementKind::P1;
  if (uses_bc)
    for (const Edge& e : t.edges)
      if (e.boundary()) bc.at(e.boundary_label);  // throws on unlabeled segments

  auto dirichlet_edge = [&](const Edge& e) {
    return e.boundary() && bc.at(e.boundary_label) == BCType::Dirichlet;
  };

  switch (kind) {
    case ElementKind::CR:
    case ElementKind::ECR:
      dm.edge_dof.assign(t.num_edges(), -1);
      for (int e = 0; e < t.num_edges(); ++e) {
        if (dirichlet_edge(t.edges[e])) {
          ++dm.n_constrained;
        } else {
          dm.edge_dof[e] = dm.n_free++;
        }
      }
      if (kind == ElementKind::ECR) {
        dm.element_dof.assign(t.num_triangles(), -1);
        for (int k = 0; k < t.num_triangles(); ++k) dm.element_dof[k] = dm.n_free++;
      }
      break;
    case ElementKind::P1: {
      std::vector<bool> constrained(t.num_vertices(), false);
      for (const Edge& e : t.edges)
        if (dirichlet_edge(e)) constrained[e.v0] = constrained[e.v1] = true;
      dm.vertex_dof.assign(t.num_vertices(), -1);
      for (int v = 0; v < t.num_vertices(); ++v) {
        if (constrained[v]) {
          ++dm.n_constrained;
        } else {
          dm.vertex_dof[v] = dm.n_free++;
        }
      }
      break;
    }
    case ElementKind::RT0:
      dm.edge_dof.resize(t.num_edges());
      for (int e = 0; e < t.num_edges(); ++e) dm.edge_dof[e] = dm.n_free++;
      break;
    case ElementKind::P0:
      dm.element_dof.resize(t.num_triangles());
      for (int k = 0; k < t.num_triangles(); ++k) dm.element_dof[k] = dm.n_free++;
      break;
  }
  return dm;
}

Eigen::Vector4d ecr_monomial_coeffs(const Triangulation& t, int k, const Eigen::Vector4d& dofs) {
  const ElementGeometry g = element_geometry(t, k);
  const auto& tri = t.triangles[k];
  Eigen::Matrix4d d;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = t.vertices[tri[(i + 1) % 3]] - g.centroid;
    const Vec2 b = t.vertices[tri[(i + 2) % 3]] - g.centroid;
    const Vec2 m = 0.5 * (a + b);
    d(i, 0) = 1.0;
    d(i, 1) = m.x();
    d(i, 2) = m.y();
    // Simpson, exact for the quadratic monomial.
    d(i, 3) = (a.squaredNorm() + 4.0 * m.squaredNorm() + b.squaredNorm()) / 6.0;
  }
  d(3, 0) = 1.0;
  d(3, 1) = 0.0;
  d(3, 2) = 0.0;
  d(3, 3) = g.H_K / 36.0;  // element mean of |x - M_K|^2
  return d.partialPivLu().solve(dofs);
}

LocalShape local_shape(const Triangulation& t, const DofMap& dm, int k) {
  LocalShape s;
  s.kind = dm.kind;
  const auto& tri = t.triangles[k];
  const ElementGeometry g = element_geometry(t, k);
  for (int i = 0; i < 3; ++i) {
    s.p[i] = t.vertices[tri[i]];
    s.grad_lambda[i] = -g.normal[i] / g.height[i];
    s.height[i] = g.height[i];
    s.edge_length[i] = g.edge_length[i];
  }
  s.centroid = g.centroid;
  s.area = g.area;
  switch (dm.kind) {
    case ElementKind::CR:
      s.n = 3;
      for (int i = 0; i < 3; ++i) s.global[i] = dm.edge_dof[t.tri_edges[k][i]];
      break;
    case ElementKind::ECR: {
      s.n = 4;
      for (int i = 0; i < 3; ++i) s.global[i] = dm.edge_dof[t.tri_edges[k][i]];
      s.global[3] = dm.element_dof[k];
      Eigen::Matrix4d basis;
      for (int j = 0; j < 4; ++j)
        basis.col(j) = ecr_monomial_coeffs(t, k, Eigen::Vector4d::Unit(j));
      s.coef = basis;
      break;
    }
    case ElementKind::P1:
      s.n = 3;
      for (int i = 0; i < 3; ++i) s.global[i] = dm.vertex_dof[tri[i]];
      break;
    case ElementKind::RT0:
      s.n = 3;
      for (int i = 0; i < 3; ++i) {
        const int e = t.tri_edges[k][i];
        s.global[i] = dm.edge_dof[e];
        s.sign[i] = t.orientation(k, e);
      }
      break;
    case ElementKind::P0:
      s.n = 1;
      s.global[0] = dm.element_dof[k];
      break;
  }
  return s;
}

Eigen::Vector4d LocalShape::values(const Vec2& x) const {
  Eigen::Vector4d v = Eigen::Vector4d::Zero();
  switch (kind) {
    case ElementKind::CR:
      for (int i = 0; i < 3; ++i) v[i] = 1.0 - 2.0 * (1.0 + grad_lambda[i].dot(x - p[i]));
      break;
    case ElementKind::P1:
      for (int i = 0; i < 3; ++i) v[i] = 1.0 + grad_lambda[i].dot(x - p[i]);
      break;
    case ElementKind::ECR: {
      const Vec2 xi = x - centroid;
      const Eigen::Vector4d mono(1.0, xi.x(), xi.y(), xi.squaredNorm());
      v = coef.transpose() * mono;
      break;
    }
    case ElementKind::P0:
      v[0] = 1.0;
      break;
    case ElementKind::RT0:
      throw Error("scalar values requested from RT0 shape");
  }
  return v;
}

std::array<Vec2, 4> LocalShape::gradients(const Vec2& x) const {
  std::array<Vec2, 4> g{Vec2::Zero(), Vec2::Zero(), Vec2::Zero(), Vec2::Zero()};
  switch (kind) {
    case ElementKind::CR:
      for (int i = 0; i < 3; ++i) g[i] = -2.0 * grad_lambda[i];
      break;
    case ElementKind::P1:
      for (int i = 0; i < 3; ++i) g[i] = grad_lambda[i];
      break;
    case ElementKind::ECR: {
      const Vec2 xi = x - centroid;
      for (int j = 0; j < 4; ++j)
        g[j] = Vec2(coef(1, j) + 2.0 * coef(3, j) * xi.x(), coef(2, j) + 2.0 * coef(3, j) * xi.y());
      break;
    }
    case ElementKind::P0:
      break;
    case ElementKind::RT0:
      throw Error("scalar gradients requested from RT0 shape");
  }
  return g;
}

std::array<Vec2, 3> LocalShape::vector_values(const Vec2& x) const {
  if (kind != ElementKind::RT0) throw Error("vector values requested from scalar shape");
  std::array<Vec2, 3> v;
  for (int i = 0; i < 3; ++i) v[i] = sign[i] * (x - p[i]) / (height[i] * edge_length[i]);
  return v;
}

std::array<double, 3> LocalShape::divergences() const {
  if (kind != ElementKind::RT0) throw Error("divergence requested from scalar shape");
  std::array<double, 3> d;
  for (int i = 0; i < 3; ++i) d[i] = sign[i] / area;
  return d;
}

FEFunction::FEFunction(const Triangulation& t, const DofMap& dm, Eigen::VectorXd coeffs)
    : mesh_(&t), dofmap_(&dm), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != dm.n_free) throw Error("FEFunction: coefficient length mismatch");
}

void FEFunction::check_point(int k, const Vec2& x) const {
  if (!mesh_->contains(k, x, 1e-9)) throw Error("FEFunction: point outside element");
}

Eigen::Vector4d FEFunction::local_coeffs(int k) const {
  const LocalShape s = local_shape(*mesh_, *dofmap_, k);
  Eigen::Vector4d c = Eigen::Vector4d::Zero();
  for (int i = 0; i < s.n; ++i)
    if (s.global[i] >= 0) c[i] = coeffs_[s.global[i]];
  return c;
}

double FEFunction::value(int k, const Vec2& x) const {
  check_point(k, x);
  const LocalShape s = local_shape(*mesh_, *dofmap_, k);
  return s.values(x).dot(local_coeffs(k));
}

Vec2 FEFunction::gradient(int k, const Vec2& x) const {
  check_point(k, x);
  const LocalShape s = local_shape(*mesh_, *dofmap_, k);
  const Eigen::Vector4d c = local_coeffs(k);
  const auto g = s.gradients(x);
  Vec2 out = Vec2::Zero();
  for (int i = 0; i < s.n; ++i) out += c[i] * g[i];
  return out;
}

Vec2 FEFunction::vector_value(int k, const Vec2& x) const {
  check_point(k, x);
  const LocalShape s = local_shape(*mesh_, *dofmap_, k);
  const Eigen::Vector4d c = local_coeffs(k);
  const auto v = s.vector_values(x);
  Vec2 out = Vec2::Zero();
  for (int i = 0; i < 3; ++i) out += c[i] * v[i];
  return out;
}

double FEFunction::divergence(int k) const {
  const LocalShape s = local_shape(*mesh_, *dofmap_, k);
  const Eigen::Vector4d c = local_coeffs(k);
  const auto d = s.divergences();
  double out = 0.0;
  for (int i = 0; i < 3; ++i) out += c[i] * d[i];
  return out;
}

FEFunction canonical_interpolate(const Triangulation& t, const DofMap& dm, const ScalarField& f) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(dm.n_free);
  switch (dm.kind) {
    case ElementKind::CR:
    case ElementKind::ECR:
      for (int e = 0; e < t.num_edges(); ++e) {
        if (dm.edge_dof[e] < 0) continue;
        const Edge& ed = t.edges[e];
        c[dm.edge_dof[e]] = edge_mean(t.vertices[ed.v0], t.vertices[ed.v1], f);
      }
      if (dm.kind == ElementKind::ECR)
        for (int k = 0; k < t.num_triangles(); ++k)
          c[dm.element_dof[k]] = integrate(t, k, f) / element_geometry(t, k).area;
      break;
    case ElementKind::P1:
      for (int v = 0; v < t.num_vertices(); ++v)
        if (dm.vertex_dof[v] >= 0) c[dm.vertex_dof[v]] = f(t.vertices[v]);
      break;
    case ElementKind::P0:
      for (int k = 0; k < t.num_triangles(); ++k)
        c[dm.element_dof[k]] = integrate(t, k, f) / element_geometry(t, k).area;
      break;
    case ElementKind::RT0:
      throw Error("canonical_interpolate: RT0 needs a vector field");
  }
  return FEFunction(t, dm, std::move(c));
}

FEFunction canonical_interpolate(const Triangulation& t, const DofMap& dm, const VectorField& f) {
  if (dm.kind != ElementKind::RT0)
    throw Error("canonical_interpolate: vector field requires RT0");
  Eigen::VectorXd c(dm.n_free);
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& ed = t.edges[e];
    const Vec2 n = t.edge_normal(e);
    const double flux = t.edge_length(e) * edge_mean(t.vertices[ed.v0], t.vertices[ed.v1],
                                                     [&](const Vec2& x) { return f(x).dot(n); });
    c[dm.edge_dof[e]] = flux;
  }
  return FEFunction(t, dm, std::move(c));
}

}  // namespace supereig
