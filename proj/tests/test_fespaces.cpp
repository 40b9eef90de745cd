// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "supereig/error.hpp"
#include "supereig/fespaces.hpp"
#include "supereig/quadrature.hpp"

using namespace supereig;

namespace {

constexpr double kPi = 3.14159265358979323846;

Vec2 point_in(const Triangulation& t, int k, double l0, double l1) {
  const auto& tri = t.triangles[k];
  return l0 * t.vertices[tri[0]] + l1 * t.vertices[tri[1]] +
         (1.0 - l0 - l1) * t.vertices[tri[2]];
}

}  // namespace

TEST_CASE("free DOF counts on the level-1 unit square with full Dirichlet") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 1);
  const BoundaryConditions bc = BoundaryConditions::all_dirichlet(t.domain);
  CHECK(build_dofmap(t, ElementKind::CR, bc).n_free == 1);   // only the diagonal edge
  CHECK(build_dofmap(t, ElementKind::P1, bc).n_free == 0);   // all vertices on the boundary
  CHECK(build_dofmap(t, ElementKind::ECR, bc).n_free == 3);  // 1 edge + 2 element means
}

TEST_CASE("free plus constrained DOFs equals the entity count of the kind") {
  const Triangulation t = build_domain(DomainKind::PerturbedSquare, 3);
  const BoundaryConditions bc = BoundaryConditions::all_dirichlet(t.domain);
  const DofMap cr = build_dofmap(t, ElementKind::CR, bc);
  CHECK(cr.n_free + cr.n_constrained == t.num_edges());
  const int interior = t.num_edges() - t.num_boundary_edges();
  CHECK(cr.n_free == interior);
  const DofMap ecr = build_dofmap(t, ElementKind::ECR, bc);
  CHECK(ecr.n_free + ecr.n_constrained == t.num_edges() + t.num_triangles());
  const DofMap p1 = build_dofmap(t, ElementKind::P1, bc);
  CHECK(p1.n_free + p1.n_constrained == t.num_vertices());
  CHECK(build_dofmap(t, ElementKind::RT0, bc).n_free == t.num_edges());
  CHECK(build_dofmap(t, ElementKind::P0, bc).n_free == t.num_triangles());
}

TEST_CASE("unlabeled boundary segments are a configuration error") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 2);
  BoundaryConditions bc = BoundaryConditions::all_dirichlet(t.domain);
  bc.by_label.erase(2);
  CHECK_THROWS_AS(build_dofmap(t, ElementKind::CR, bc), Error);
}

TEST_CASE("canonical interpolation reproduces functions inside the local spaces") {
  const Triangulation t = build_domain(DomainKind::PerturbedSquare, 2);
  const BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  const auto affine = [](const Vec2& x) { return 0.7 - 1.3 * x.x() + 0.4 * x.y(); };
  const auto radial = [](const Vec2& x) { return x.squaredNorm(); };
  const auto cvec = [](const Vec2&) { return Vec2(0.3, -1.1); };

  const DofMap cr = build_dofmap(t, ElementKind::CR, bc);
  const FEFunction ua = canonical_interpolate(t, cr, ScalarField(affine));
  const DofMap ecr = build_dofmap(t, ElementKind::ECR, bc);
  const FEFunction ur = canonical_interpolate(t, ecr, ScalarField(radial));
  const DofMap rt = build_dofmap(t, ElementKind::RT0, bc);
  const FEFunction uc = canonical_interpolate(t, rt, VectorField(cvec));
  for (int k = 0; k < t.num_triangles(); ++k)
    for (double l0 : {0.2, 0.5}) {
      const Vec2 x = point_in(t, k, l0, 0.3);
      CHECK(ua.value(k, x) == doctest::Approx(affine(x)).epsilon(1e-12));
      CHECK(ur.value(k, x) == doctest::Approx(radial(x)).epsilon(1e-11));
      CHECK((ur.gradient(k, x) - 2.0 * x).norm() <= 1e-10);
      CHECK((uc.vector_value(k, x) - cvec(x)).norm() <= 1e-12);
    }
}

TEST_CASE("canonical interpolation is idempotent on discrete functions") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 3);
  const BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (ElementKind kind : {ElementKind::CR, ElementKind::ECR, ElementKind::P1}) {
    const DofMap dm = build_dofmap(t, kind, bc);
    Eigen::VectorXd c(dm.n_free);
    for (int i = 0; i < dm.n_free; ++i) c[i] = u(rng);
    const FEFunction f(t, dm, c);
    // Evaluating the discrete function element by element requires locating
    // the element; interpolation only probes points inside elements or on
    // their edges, so a containment search is enough.
    const auto field = [&](const Vec2& x) {
      for (int k = 0; k < t.num_triangles(); ++k)
        if (t.contains(k, x, 1e-9)) return f.value(k, x);
      throw Error("sample point outside mesh");
    };
    const FEFunction g = canonical_interpolate(t, dm, ScalarField(field));
    CHECK((g.coeffs() - c).lpNorm<Eigen::Infinity>() <= 1e-11);
  }
}

TEST_CASE("CR basis functions are nodal at edge midpoints") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 2);
  const BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  const DofMap dm = build_dofmap(t, ElementKind::CR, bc);
  for (int k = 0; k < t.num_triangles(); ++k)
    for (int i = 0; i < 3; ++i) {
      const int e = t.tri_edges[k][i];
      Eigen::VectorXd c = Eigen::VectorXd::Zero(dm.n_free);
      c[dm.edge_dof[e]] = 1.0;
      const FEFunction phi(t, dm, c);
      for (int j = 0; j < 3; ++j) {
        const double expected = i == j ? 1.0 : 0.0;
        CHECK(phi.value(k, t.edge_midpoint(t.tri_edges[k][j])) ==
              doctest::Approx(expected).epsilon(1e-12));
      }
    }
}

TEST_CASE("RT0 divergence is elementwise constant and exact for linear fields") {
  const Triangulation t = build_domain(DomainKind::PerturbedSquare, 2);
  const DofMap dm = build_dofmap(t, ElementKind::RT0, BoundaryConditions::all_neumann(t.domain));
  const FEFunction s = canonical_interpolate(t, dm, VectorField([](const Vec2& x) { return x; }));
  for (int k = 0; k < t.num_triangles(); ++k)
    CHECK(s.divergence(k) == doctest::Approx(2.0).epsilon(1e-11));
}

TEST_CASE("point evaluation rejects points outside the element") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 2);
  const DofMap dm = build_dofmap(t, ElementKind::CR, BoundaryConditions::all_neumann(t.domain));
  const FEFunction f(t, dm, Eigen::VectorXd::Zero(dm.n_free));
  CHECK_THROWS_AS(f.value(0, Vec2(5.0, 5.0)), Error);
}

TEST_CASE("elementwise commuting property of the CR and ECR interpolations") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Triangulation t = build_domain(DomainKind::PerturbedSquare, 3);
  const BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  // A quadratic is integrated exactly by the module rules, so the orthogonality
  // of the interpolation remainder against broken gradients is machine exact.
  double a[6];
  for (double& c : a) c = u(rng);
  const auto w = [&](const Vec2& x) {
    return a[0] + a[1] * x.x() + a[2] * x.y() + a[3] * x.x() * x.x() + a[4] * x.x() * x.y() +
           a[5] * x.y() * x.y();
  };
  const auto gw = [&](const Vec2& x) {
    return Vec2(a[1] + 2.0 * a[3] * x.x() + a[4] * x.y(),
                a[2] + a[4] * x.x() + 2.0 * a[5] * x.y());
  };
  for (ElementKind kind : {ElementKind::CR, ElementKind::ECR}) {
    const DofMap dm = build_dofmap(t, kind, bc);
    const FEFunction iw = canonical_interpolate(t, dm, ScalarField(w));
    for (int k = 0; k < t.num_triangles(); ++k) {
      const LocalShape sh = local_shape(t, dm, k);
      for (int i = 0; i < sh.n; ++i) {
        const double val = integrate(t, k, [&](const Vec2& x) {
          return (gw(x) - iw.gradient(k, x)).dot(sh.gradients(x)[i]);
        });
        CHECK(std::abs(val) <= 1e-12);
      }
    }
  }
}

TEST_CASE("Fortin property of the RT0 interpolation against piecewise constants") {
  const Triangulation t = build_domain(DomainKind::PerturbedSquare, 3);
  const DofMap dm = build_dofmap(t, ElementKind::RT0, BoundaryConditions::all_neumann(t.domain));
  const auto tau = [](const Vec2& x) {
    return Vec2(0.4 * x.x() * x.x() - x.y(), 1.2 * x.x() * x.y() + 0.3);
  };
  const auto div_tau = [](const Vec2& x) { return 0.8 * x.x() + 1.2 * x.x(); };
  const FEFunction itau = canonical_interpolate(t, dm, VectorField(tau));
  for (int k = 0; k < t.num_triangles(); ++k) {
    const double val =
        integrate(t, k, [&](const Vec2& x) { return div_tau(x) - itau.divergence(k); });
    CHECK(std::abs(val) <= 1e-12);
  }
}

TEST_CASE("edge-mean jumps of CR and ECR functions vanish across interior edges") {
  const Triangulation t = build_domain(DomainKind::EquilateralTriangle, 3);
  const BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (ElementKind kind : {ElementKind::CR, ElementKind::ECR}) {
    const DofMap dm = build_dofmap(t, kind, bc);
    Eigen::VectorXd c(dm.n_free);
    for (int i = 0; i < dm.n_free; ++i) c[i] = u(rng);
    const FEFunction f(t, dm, c);
    for (int e = 0; e < t.num_edges(); ++e) {
      const Edge& ed = t.edges[e];
      if (ed.boundary()) continue;
      const Vec2 a = t.vertices[ed.v0];
      const Vec2 b = t.vertices[ed.v1];
      const double jump = edge_mean(
          a, b, [&](const Vec2& x) { return f.value(ed.tri[0], x) - f.value(ed.tri[1], x); });
      CHECK(std::abs(jump) <= 1e-12);
    }
  }
}

TEST_CASE("interpolation DOF functionals are reproduced") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 3);
  const BoundaryConditions bc = BoundaryConditions::all_neumann(t.domain);
  const auto f = [](const Vec2& x) { return std::sin(kPi * x.x()) * std::cos(kPi * x.y()); };
  const DofMap ecr = build_dofmap(t, ElementKind::ECR, bc);
  const FEFunction g = canonical_interpolate(t, ecr, ScalarField(f));
  // Edge means of the interpolant agree with edge means of f, and element
  // means likewise; both to quadrature accuracy.
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& ed = t.edges[e];
    const Vec2 a = t.vertices[ed.v0];
    const Vec2 b = t.vertices[ed.v1];
    const int k = ed.tri[0];
    const double mf = edge_mean(a, b, f);
    const double mg = edge_mean(a, b, [&](const Vec2& x) { return g.value(k, x); });
    CHECK(mg == doctest::Approx(mf).epsilon(1e-9));
  }
  for (int k = 0; k < t.num_triangles(); ++k) {
    const double area = element_geometry(t, k).area;
    const double mf = integrate(t, k, f) / area;
    const double mg = integrate(t, k, [&](const Vec2& x) { return g.value(k, x); }) / area;
    CHECK(mg == doctest::Approx(mf).epsilon(1e-9));
  }
}
