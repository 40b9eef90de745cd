// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "supereig/mesh.hpp"

using namespace supereig;

namespace {

int euler_characteristic(const Triangulation& t) {
  return t.num_vertices() - t.num_edges() + t.num_triangles();
}

}  // namespace

TEST_CASE("level-1 meshes have the expected entity counts") {
  const Triangulation sq = build_domain(DomainKind::UnitSquare, 1);
  CHECK(sq.num_vertices() == 4);
  CHECK(sq.num_triangles() == 2);
  CHECK(sq.num_edges() == 5);
  CHECK(sq.num_boundary_edges() == 4);

  const Triangulation ps = build_domain(DomainKind::PerturbedSquare, 1);
  CHECK(ps.num_vertices() == 7);
  CHECK(ps.num_triangles() == 5);
  CHECK(ps.num_edges() == 11);

  const Triangulation tri = build_domain(DomainKind::EquilateralTriangle, 1);
  CHECK(tri.num_vertices() == 6);
  CHECK(tri.num_triangles() == 4);

  const Triangulation ls = build_domain(DomainKind::LShape, 1);
  CHECK(ls.num_vertices() == 8);
  CHECK(ls.num_triangles() == 6);
}

TEST_CASE("refinement multiplies triangle count by four and keeps Euler characteristic") {
  for (DomainKind kind : {DomainKind::UnitSquare, DomainKind::PerturbedSquare,
                          DomainKind::EquilateralTriangle, DomainKind::LShape}) {
    Triangulation t = build_domain(kind, 1);
    const int base = t.num_triangles();
    for (int level = 2; level <= 4; ++level) {
      t = uniform_refine(t);
      CHECK(t.num_triangles() == base * (1 << (2 * (level - 1))));
      CHECK(euler_characteristic(t) == 1);
      CHECK(t.level == level);
    }
  }
}

TEST_CASE("children use only parent vertices and edge midpoints") {
  const Triangulation parent = build_domain(DomainKind::PerturbedSquare, 2);
  const Triangulation child = uniform_refine(parent);
  std::set<std::pair<double, double>> allowed;
  for (const Vec2& v : parent.vertices) allowed.insert({v.x(), v.y()});
  for (int e = 0; e < parent.num_edges(); ++e) {
    const Vec2 m = parent.edge_midpoint(e);
    allowed.insert({m.x(), m.y()});
  }
  for (const Vec2& v : child.vertices) CHECK(allowed.count({v.x(), v.y()}) == 1);
  REQUIRE(child.parent_map.size() == static_cast<size_t>(child.num_triangles()));
  for (int k = 0; k < child.num_triangles(); ++k) {
    const int p = child.parent_map[k];
    const Vec2 c = (child.vertices[child.triangles[k][0]] + child.vertices[child.triangles[k][1]] +
                    child.vertices[child.triangles[k][2]]) /
                   3.0;
    CHECK(parent.contains(p, c));
  }
}

TEST_CASE("element geometry invariants") {
  const Triangulation t = build_domain(DomainKind::PerturbedSquare, 3);
  for (int k = 0; k < t.num_triangles(); ++k) {
    const ElementGeometry g = element_geometry(t, k);
    CHECK(g.area > 0.0);
    for (int i = 0; i < 3; ++i) {
      CHECK(g.height[i] * g.edge_length[i] == doctest::Approx(2.0 * g.area).epsilon(1e-13));
      CHECK(g.normal[i].norm() == doctest::Approx(1.0).epsilon(1e-13));
      // Outward: points away from the centroid.
      const auto& tri = t.triangles[k];
      const Vec2 mid = 0.5 * (t.vertices[tri[(i + 1) % 3]] + t.vertices[tri[(i + 2) % 3]]);
      CHECK(g.normal[i].dot(mid - g.centroid) > 0.0);
    }
  }
}

TEST_CASE("reference triangle geometry values") {
  Triangulation t;
  t.domain = DomainSpec::make(DomainKind::UnitSquare);
  t.vertices = {{0, 0}, {1, 0}, {0, 1}};
  t.triangles = {{0, 1, 2}};
  const ElementGeometry g = element_geometry(t, 0);
  CHECK(g.H_K == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g.centroid.x() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(g.centroid.y() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // Defining double sum evaluated term by term gives zero here.
  CHECK(g.A_K == doctest::Approx(0.0));
}

TEST_CASE("A_K and B_K match the defining sums on a random triangle") {
  const Vec2 p[3] = {{0.12, -0.3}, {1.4, 0.2}, {0.5, 1.1}};
  Triangulation t;
  t.domain = DomainSpec::make(DomainKind::UnitSquare);
  t.vertices = {p[0], p[1], p[2]};
  t.triangles = {{0, 1, 2}};
  const ElementGeometry g = element_geometry(t, 0);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < 3; ++i) {
    b += 2.0 * p[i].x() * p[i].y();
    for (int j = 0; j < i; ++j) {
      a += (p[i].x() - p[j].x()) * (p[i].x() - p[j].x()) -
           (p[i].y() - p[j].y()) * (p[i].y() - p[j].y());
    }
    for (int j = 0; j < 3; ++j) {
      if (i != j) b -= p[i].x() * p[j].y();
    }
  }
  CHECK(g.A_K == doctest::Approx(a).epsilon(1e-14));
  CHECK(g.B_K == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("uniformity detection") {
  for (int level = 1; level <= 4; ++level) {
    CHECK(check_uniform(build_domain(DomainKind::UnitSquare, level)));
    CHECK(check_uniform(build_domain(DomainKind::EquilateralTriangle, level)));
  }
  CHECK_FALSE(check_uniform(build_domain(DomainKind::PerturbedSquare, 2)));

  Triangulation single;
  single.domain = DomainSpec::make(DomainKind::UnitSquare);
  single.vertices = {{0, 0}, {1, 0}, {0, 1}};
  single.triangles = {{0, 1, 2}};
  CHECK(check_uniform(single));  // vacuous, no interior edges
}

TEST_CASE("interior edge orientation points from the larger-label element") {
  const Triangulation t = build_domain(DomainKind::UnitSquare, 3);
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& ed = t.edges[e];
    if (ed.boundary()) {
      CHECK(ed.boundary_label >= 0);
      continue;
    }
    CHECK(ed.tri[0] > ed.tri[1]);
    CHECK(t.orientation(ed.tri[0], e) == 1.0);
    CHECK(t.orientation(ed.tri[1], e) == -1.0);
  }
}

TEST_CASE("boundary labels partition the boundary") {
  const Triangulation t = build_domain(DomainKind::EquilateralTriangle, 3);
  std::set<int> seen;
  for (const Edge& e : t.edges)
    if (e.boundary()) seen.insert(e.boundary_label);
  CHECK(seen == std::set<int>{0, 1, 2});
}

TEST_CASE("mesh text round trip") {
  const Triangulation t = build_domain(DomainKind::LShape, 3);
  std::stringstream ss;
  write_mesh(ss, t);
  const Triangulation r = read_mesh(ss);
  REQUIRE(r.num_vertices() == t.num_vertices());
  REQUIRE(r.num_triangles() == t.num_triangles());
  for (int v = 0; v < t.num_vertices(); ++v)
    CHECK((r.vertices[v] - t.vertices[v]).norm() == doctest::Approx(0.0));
  for (int k = 0; k < t.num_triangles(); ++k) CHECK(r.triangles[k] == t.triangles[k]);
  for (int e = 0; e < t.num_edges(); ++e)
    CHECK(r.edges[e].boundary_label == t.edges[e].boundary_label);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS(build_domain(DomainKind::UnitSquare, 0));
  CHECK_THROWS(parse_domain_kind("hexagon"));
  Triangulation bad;
  bad.domain = DomainSpec::make(DomainKind::UnitSquare);
  bad.vertices = {{0, 0}, {1, 0}, {0, 1}};
  bad.triangles = {{0, 2, 1}};  // clockwise
  CHECK_THROWS(element_geometry(bad, 0));
}
