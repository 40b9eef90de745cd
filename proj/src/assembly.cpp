// SPDX-License-Identifier: Apache-2.0

#include "supereig/assembly.hpp"

#include <ostream>
#include <vector>

#include "supereig/error.hpp"
#include "supereig/quadrature.hpp"

namespace supereig {

namespace {

void require_primal(const DofMap& dm, const char* op) {
  if (dm.kind == ElementKind::RT0 || dm.kind == ElementKind::P0)
    throw Error(std::string(op) + ": kind must be CR, ECR or P1");
}

std::array<Vec2, TriangleRule::size> physical_points(const Triangulation& t, int k) {
  const auto& tri = t.triangles[k];
  const Vec2 p0 = t.vertices[tri[0]], p1 = t.vertices[tri[1]], p2 = t.vertices[tri[2]];
  const TriangleRule& r = TriangleRule::get();
  std::array<Vec2, TriangleRule::size> x;
  for (int q = 0; q < TriangleRule::size; ++q) {
    const Eigen::Vector3d& b = r.barycentric[q];
    x[q] = b[0] * p0 + b[1] * p1 + b[2] * p2;
  }
  return x;
}

void scatter(std::vector<Eigen::Triplet<double>>& triplets, const LocalShape& s,
             const Eigen::Matrix4d& local) {
  for (int i = 0; i < s.n; ++i) {
    if (s.global[i] < 0) continue;
    for (int j = 0; j < s.n; ++j) {
      if (s.global[j] < 0) continue;
      triplets.emplace_back(s.global[i], s.global[j], local(i, j));
    }
  }
}

}  // namespace

SparseSystem assemble_stiffness(const Triangulation& t, const DofMap& dm) {
  require_primal(dm, "assemble_stiffness");
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < t.num_triangles(); ++k) {
    const LocalShape s = local_shape(t, dm, k);
    Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
    const TriangleRule& r = TriangleRule::get();
    const auto x = physical_points(t, k);
    for (int q = 0; q < TriangleRule::size; ++q) {
      const auto g = s.gradients(x[q]);
      const double w = r.weight[q] * s.area;
      for (int i = 0; i < s.n; ++i)
        for (int j = 0; j < s.n; ++j) local(i, j) += w * g[i].dot(g[j]);
    }
    scatter(triplets, s, local);
  }
  SparseSystem sys;
  sys.dim = dm.n_free;
  sys.matrix.resize(dm.n_free, dm.n_free);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

SparseSystem assemble_mass(const Triangulation& t, const DofMap& dm) {
  require_primal(dm, "assemble_mass");
  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < t.num_triangles(); ++k) {
    const LocalShape s = local_shape(t, dm, k);
    Eigen::Matrix4d local = Eigen::Matrix4d::Zero();
    if (dm.kind == ElementKind::CR) {
      // Midpoint rule: exact for the quadratic products, and the CR basis is
      // nodal at the midpoints, so the local matrix is exactly (|K|/3) I and
      // the global matrix is diagonal.
      local.topLeftCorner<3, 3>() = (s.area / 3.0) * Eigen::Matrix3d::Identity();
    } else {
      const TriangleRule& r = TriangleRule::get();
      const auto x = physical_points(t, k);
      for (int q = 0; q < TriangleRule::size; ++q) {
        const Eigen::Vector4d v = s.values(x[q]);
        // Form the outer product first so the scalar weight multiplies a
        // bitwise-symmetric matrix and A = A^T holds exactly.
        const Eigen::Matrix4d outer = v * v.transpose();
        local += (r.weight[q] * s.area) * outer;
      }
    }
    scatter(triplets, s, local);
  }
  SparseSystem sys;
  sys.dim = dm.n_free;
  sys.matrix.resize(dm.n_free, dm.n_free);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.prune([](int, int, double v) { return v != 0.0; });
  return sys;
}

Eigen::VectorXd assemble_load(const Triangulation& t, const DofMap& dm, const ScalarField& f) {
  if (dm.kind == ElementKind::RT0) throw Error("assemble_load: RT0 unsupported");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dm.n_free);
  for (int k = 0; k < t.num_triangles(); ++k) {
    const LocalShape s = local_shape(t, dm, k);
    const TriangleRule& r = TriangleRule::get();
    const auto x = physical_points(t, k);
    Eigen::Vector4d local = Eigen::Vector4d::Zero();
    for (int q = 0; q < TriangleRule::size; ++q)
      local += (r.weight[q] * s.area * f(x[q])) * s.values(x[q]);
    for (int i = 0; i < s.n; ++i)
      if (s.global[i] >= 0) rhs[s.global[i]] += local[i];
  }
  return rhs;
}

RTSaddle assemble_rt_saddle(const Triangulation& t, const ScalarField& f) {
  RTSaddle out;
  out.n_flux = t.num_edges();
  out.n_cell = t.num_triangles();
  const int n = out.n_flux + out.n_cell;
  const DofMap rt = build_dofmap(t, ElementKind::RT0, {});
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < t.num_triangles(); ++k) {
    const LocalShape s = local_shape(t, rt, k);
    const TriangleRule& r = TriangleRule::get();
    const auto x = physical_points(t, k);
    Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
    for (int q = 0; q < TriangleRule::size; ++q) {
      const auto v = s.vector_values(x[q]);
      const double w = r.weight[q] * s.area;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) += w * v[i].dot(v[j]);
    }
    const auto div = s.divergences();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) triplets.emplace_back(s.global[i], s.global[j], m(i, j));
      const double b = s.area * div[i];  // integral of div over K, = +-1
      triplets.emplace_back(s.global[i], out.n_flux + k, -b);
      triplets.emplace_back(out.n_flux + k, s.global[i], b);
    }
    rhs[out.n_flux + k] = integrate(t, k, f);
  }
  out.system.dim = n;
  out.system.matrix.resize(n, n);
  out.system.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.system.rhs = std::move(rhs);
  return out;
}

void write_matrix_coordinate(std::ostream& os, const SparseSystem& s) {
  os.precision(17);
  for (int c = 0; c < s.matrix.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(s.matrix, c); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

}  // namespace supereig
