// SPDX-License-Identifier: Apache-2.0

#include "supereig/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "supereig/assembly.hpp"
#include "supereig/error.hpp"
#include "supereig/quadrature.hpp"

namespace supereig {

namespace {

// CR basis values of element k at x, indexed by local edge (opposite vertex).
Eigen::Vector3d cr_values(const Triangulation& t, int k, const Vec2& x) {
  const Eigen::Vector3d lambda = t.barycentric(k, x);
  return Eigen::Vector3d::Ones() - 2.0 * lambda;
}

std::vector<std::vector<int>> vertex_elements(const Triangulation& t) {
  std::vector<std::vector<int>> adj(t.num_vertices());
  for (int k = 0; k < t.num_triangles(); ++k)
    for (int v : t.triangles[k]) adj[v].push_back(k);
  return adj;
}

}  // namespace

ElementVectorField broken_gradient_field(const FEFunction& u) {
  return [&u](int k, const Vec2& x) { return u.gradient(k, x); };
}

ElementVectorField rt_flux_field(const FEFunction& sigma) {
  return [&sigma](int k, const Vec2& x) { return sigma.vector_value(k, x); };
}

Vec2 RecoveredGradient::value(int k, const Vec2& x) const {
  const Eigen::Vector3d phi = cr_values(*mesh, k, x);
  Vec2 out = Vec2::Zero();
  for (int i = 0; i < 3; ++i) out += phi[i] * midpoint[mesh->tri_edges[k][i]];
  return out;
}

Eigen::Matrix2d RecoveredGradient::element_gradient(int k) const {
  const ElementGeometry g = element_geometry(*mesh, k);
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec2 grad_phi = 2.0 * g.normal[i] / g.height[i];  // gradient of the CR basis
    h += midpoint[mesh->tri_edges[k][i]] * grad_phi.transpose();
  }
  return h;
}

RecoveredGradient recover_kh(const Triangulation& t, const ElementVectorField& q) {
  RecoveredGradient out;
  out.mesh = &t;
  out.midpoint.assign(t.num_edges(), Vec2::Zero());
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& ed = t.edges[e];
    if (ed.boundary()) continue;
    const Vec2 m = t.edge_midpoint(e);
    out.midpoint[e] = 0.5 * (q(ed.tri[0], m) + q(ed.tri[1], m));
  }
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& ed = t.edges[e];
    if (!ed.boundary()) continue;
    const int k = ed.tri[0];
    const Vec2 m = t.edge_midpoint(e);
    // Among the interior edges e' of k whose neighbor contributes an interior
    // far edge e'', pick the pair whose linear extrapolation point 2m' - m''
    // lands closest to the boundary midpoint m. On uniform meshes the three
    // midpoints are collinear and the extrapolation is exact for linears.
    double best = std::numeric_limits<double>::infinity();
    int best_ep = -1, best_epp = -1;
    for (int i = 0; i < 3; ++i) {
      const int ep = t.tri_edges[k][i];
      if (t.edges[ep].boundary()) continue;
      const Edge& edp = t.edges[ep];
      const int kp = edp.tri[0] == k ? edp.tri[1] : edp.tri[0];
      // Far edge: the edge of the neighbor sharing no vertex with e.
      int epp = -1;
      for (int j = 0; j < 3; ++j) {
        const int cand = t.tri_edges[kp][j];
        const Edge& c = t.edges[cand];
        if (c.v0 != ed.v0 && c.v0 != ed.v1 && c.v1 != ed.v0 && c.v1 != ed.v1) epp = cand;
      }
      if (epp < 0 || t.edges[epp].boundary()) continue;
      const double defect =
          (2.0 * t.edge_midpoint(ep) - t.edge_midpoint(epp) - m).squaredNorm();
      if (defect < best) {
        best = defect;
        best_ep = ep;
        best_epp = epp;
      }
    }
    if (best_ep < 0) throw Error("recover_kh: no admissible neighbor for boundary edge");
    out.midpoint[e] = 2.0 * out.midpoint[best_ep] - out.midpoint[best_epp];
  }
  return out;
}

Vec2 NodalGradient::value(int k, const Vec2& x) const {
  const Eigen::Vector3d lambda = mesh->barycentric(k, x);
  const auto& tri = mesh->triangles[k];
  Vec2 out = Vec2::Zero();
  for (int i = 0; i < 3; ++i) out += lambda[i] * values[tri[i]];
  return out;
}

Eigen::Matrix2d NodalGradient::element_gradient(int k) const {
  const ElementGeometry g = element_geometry(*mesh, k);
  const auto& tri = mesh->triangles[k];
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec2 grad_lambda = -g.normal[i] / g.height[i];
    h += values[tri[i]] * grad_lambda.transpose();
  }
  return h;
}

NodalGradient recover_ppr(const FEFunction& u_p1) {
  if (u_p1.kind() != ElementKind::P1) throw Error("recover_ppr: P1 input required");
  const Triangulation& t = u_p1.mesh();
  const DofMap& dm = u_p1.dofmap();
  const auto adj = vertex_elements(t);
  std::vector<double> nodal(t.num_vertices(), 0.0);
  for (int v = 0; v < t.num_vertices(); ++v)
    if (dm.vertex_dof[v] >= 0) nodal[v] = u_p1.coeffs()[dm.vertex_dof[v]];

  NodalGradient out;
  out.mesh = &t;
  out.values.assign(t.num_vertices(), Vec2::Zero());
  for (int v = 0; v < t.num_vertices(); ++v) {
    std::set<int> patch;
    for (int k : adj[v])
      for (int w : t.triangles[k]) patch.insert(w);
    if (patch.size() < 6) {
      std::set<int> extended = patch;
      for (int w : patch)
        for (int k : adj[w])
          for (int z : t.triangles[k]) extended.insert(z);
      patch.swap(extended);
    }
    // Quadratic fit in coordinates centered at the vertex and scaled by the
    // patch radius.
    double scale = 0.0;
    for (int w : patch) scale = std::max(scale, (t.vertices[w] - t.vertices[v]).norm());
    bool fitted = false;
    if (patch.size() >= 6 && scale > 0.0) {
      Eigen::MatrixXd a(patch.size(), 6);
      Eigen::VectorXd b(patch.size());
      int row = 0;
      for (int w : patch) {
        const Vec2 xi = (t.vertices[w] - t.vertices[v]) / scale;
        a.row(row) << 1.0, xi.x(), xi.y(), xi.x() * xi.x(), xi.x() * xi.y(), xi.y() * xi.y();
        b[row] = nodal[w];
        ++row;
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
      qr.setThreshold(1e-10);
      if (qr.rank() == 6) {
        const Eigen::VectorXd c = qr.solve(b);
        out.values[v] = Vec2(c[1], c[2]) / scale;
        fitted = true;
      }
    }
    if (!fitted) {
      Vec2 mean = Vec2::Zero();
      for (int k : adj[v]) mean += u_p1.gradient(k, t.vertices[v]);
      out.values[v] = mean / static_cast<double>(adj[v].size());
      ++out.fallback_count;
    }
  }
  return out;
}

RayleighResult project_p1star(const FEFunction& u_cr) {
  if (u_cr.kind() != ElementKind::CR) throw Error("project_p1star: CR input required");
  const Triangulation& t = u_cr.mesh();
  const DofMap& cr = u_cr.dofmap();
  // Recover the boundary conditions the CR map was built with.
  BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  for (int e = 0; e < t.num_edges(); ++e)
    if (t.edges[e].boundary() && cr.edge_dof[e] < 0)
      bc.by_label[t.edges[e].boundary_label] = BCType::Dirichlet;

  RayleighResult out;
  out.p1_map = build_dofmap(t, ElementKind::P1, bc);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(out.p1_map.n_free);
  const auto adj = vertex_elements(t);
  for (int v = 0; v < t.num_vertices(); ++v) {
    const int dof = out.p1_map.vertex_dof[v];
    if (dof < 0) continue;
    double mean = 0.0;
    for (int k : adj[v]) mean += u_cr.value(k, t.vertices[v]);
    c[dof] = mean / static_cast<double>(adj[v].size());
  }
  const SparseSystem a = assemble_stiffness(t, out.p1_map);
  const SparseSystem m = assemble_mass(t, out.p1_map);
  const double mass = c.dot(m.matrix * c);
  if (!(mass > 0.0)) throw Error("project_p1star: projection vanished");
  c /= std::sqrt(mass);
  out.coeffs = c;
  out.lambda = c.dot(a.matrix * c);
  return out;
}

std::vector<Eigen::Matrix2d> recovered_hessian(const RecoveredGradient& kq) {
  std::vector<Eigen::Matrix2d> h(kq.mesh->num_triangles());
  for (int k = 0; k < kq.mesh->num_triangles(); ++k) h[k] = kq.element_gradient(k);
  return h;
}

}  // namespace supereig
