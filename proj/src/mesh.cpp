// SPDX-License-Identifier: Apache-2.0

#include "supereig/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "supereig/error.hpp"

namespace supereig {

namespace {

bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b, double tol) {
  const Vec2 d = b - a;
  const Vec2 r = p - a;
  const double len2 = d.squaredNorm();
  const double cross = d.x() * r.y() - d.y() * r.x();
  if (std::abs(cross) > tol * std::sqrt(len2)) return false;
  const double s = d.dot(r);
  return s >= -tol && s <= len2 + tol;
}

// Derives edges, tri_edges and boundary labels from vertices/triangles.
// Edges are created in a fixed order: elements in order, local edges opposite
// vertex 0, 1, 2, first encounter wins.
void derive_edges(Triangulation& t) {
  t.edges.clear();
  t.tri_edges.assign(t.triangles.size(), {-1, -1, -1});
  std::map<std::pair<int, int>, int> index;
  for (int k = 0; k < t.num_triangles(); ++k) {
    const auto& tri = t.triangles[k];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = index.find(key);
      if (it == index.end()) {
        Edge e;
        e.v0 = key.first;
        e.v1 = key.second;
        e.tri[0] = k;
        e.tri[1] = -1;
        it = index.emplace(key, t.num_edges()).first;
        t.edges.push_back(e);
      } else {
        Edge& e = t.edges[it->second];
        if (e.tri[1] >= 0) throw Error("mesh: edge shared by more than two elements");
        e.tri[1] = k;
        // Keep the larger-label element first.
        if (e.tri[0] < e.tri[1]) std::swap(e.tri[0], e.tri[1]);
      }
      t.tri_edges[k][i] = it->second;
    }
  }
  const double tol = 1e-12 * std::max(1.0, t.max_edge_length());
  for (Edge& e : t.edges) {
    e.boundary_label = -1;
    if (!e.boundary()) continue;
    const Vec2 m = 0.5 * (t.vertices[e.v0] + t.vertices[e.v1]);
    for (const BoundarySegment& s : t.domain.segments) {
      if (point_on_segment(m, s.a, s.b, tol)) {
        e.boundary_label = s.label;
        break;
      }
    }
    if (e.boundary_label < 0) throw Error("mesh: boundary edge not covered by any boundary segment");
  }
}

void check_orientation(const Triangulation& t) {
  for (int k = 0; k < t.num_triangles(); ++k) {
    const auto& tri = t.triangles[k];
    const Vec2 d1 = t.vertices[tri[1]] - t.vertices[tri[0]];
    const Vec2 d2 = t.vertices[tri[2]] - t.vertices[tri[0]];
    if (d1.x() * d2.y() - d1.y() * d2.x() <= 0.0)
      throw Error("mesh: element " + std::to_string(k) + " is not counterclockwise");
  }
}

Triangulation level_one(const DomainSpec& spec) {
  Triangulation t;
  t.domain = spec;
  t.level = 1;
  switch (spec.kind) {
    case DomainKind::UnitSquare:
      t.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
      t.triangles = {{0, 1, 2}, {0, 2, 3}};
      break;
    case DomainKind::PerturbedSquare:
      t.vertices = {{0, 0}, {0.05, 0}, {1, 0}, {1, 1}, {0.9, 1}, {0, 1}, {0, 0.9}};
      t.triangles = {{0, 1, 6}, {1, 4, 6}, {1, 2, 4}, {2, 3, 4}, {6, 4, 5}};
      break;
    case DomainKind::EquilateralTriangle: {
      const double s = std::sqrt(3.0);
      t.vertices = {{0.5, s / 2},  {1.0, 0.0},      {1.0, s},
                    {0.75, s / 4}, {1.0, s / 2},    {0.75, 3 * s / 4}};
      t.triangles = {{0, 3, 5}, {1, 4, 3}, {2, 5, 4}, {3, 4, 5}};
      break;
    }
    case DomainKind::LShape:
      t.vertices = {{-1, -1}, {0, -1}, {0, 0}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}};
      t.triangles = {{0, 1, 2}, {0, 2, 7}, {7, 2, 5}, {7, 5, 6}, {2, 3, 4}, {2, 4, 5}};
      break;
  }
  check_orientation(t);
  derive_edges(t);
  return t;
}

}  // namespace

DomainKind parse_domain_kind(const std::string& name) {
  if (name == "unit-square") return DomainKind::UnitSquare;
  if (name == "perturbed-square") return DomainKind::PerturbedSquare;
  if (name == "equilateral-triangle") return DomainKind::EquilateralTriangle;
  if (name == "l-shape") return DomainKind::LShape;
  throw Error("unknown domain kind: " + name);
}

std::string to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::UnitSquare: return "unit-square";
    case DomainKind::PerturbedSquare: return "perturbed-square";
    case DomainKind::EquilateralTriangle: return "equilateral-triangle";
    case DomainKind::LShape: return "l-shape";
  }
  throw Error("invalid domain kind");
}

DomainSpec DomainSpec::make(DomainKind kind) {
  DomainSpec s;
  s.kind = kind;
  switch (kind) {
    case DomainKind::UnitSquare:
    case DomainKind::PerturbedSquare:
      s.segments = {{0, {0, 0}, {1, 0}}, {1, {1, 0}, {1, 1}}, {2, {1, 1}, {0, 1}}, {3, {0, 1}, {0, 0}}};
      break;
    case DomainKind::EquilateralTriangle: {
      const double r = std::sqrt(3.0);
      s.segments = {{0, {0.5, r / 2}, {1, r}}, {1, {0.5, r / 2}, {1, 0}}, {2, {1, 0}, {1, r}}};
      break;
    }
    case DomainKind::LShape:
      s.segments = {{0, {-1, -1}, {0, -1}}, {1, {0, -1}, {0, 0}}, {2, {0, 0}, {1, 0}},
                    {3, {1, 0}, {1, 1}},    {4, {1, 1}, {-1, 1}}, {5, {-1, 1}, {-1, -1}}};
      break;
  }
  return s;
}

int Triangulation::num_boundary_edges() const {
  int n = 0;
  for (const Edge& e : edges)
    if (e.boundary()) ++n;
  return n;
}

Vec2 Triangulation::edge_normal(int e) const {
  const Edge& ed = edges[e];
  const Vec2 d = (vertices[ed.v1] - vertices[ed.v0]).normalized();
  Vec2 n(d.y(), -d.x());
  // Orient away from the first element's opposite vertex.
  const auto& tri = triangles[ed.tri[0]];
  int opp = -1;
  for (int i = 0; i < 3; ++i)
    if (tri[i] != ed.v0 && tri[i] != ed.v1) opp = tri[i];
  if (n.dot(vertices[opp] - vertices[ed.v0]) > 0.0) n = -n;
  return n;
}

Vec2 Triangulation::edge_midpoint(int e) const {
  return 0.5 * (vertices[edges[e].v0] + vertices[edges[e].v1]);
}

double Triangulation::edge_length(int e) const {
  return (vertices[edges[e].v1] - vertices[edges[e].v0]).norm();
}

double Triangulation::orientation(int k, int e) const {
  const Edge& ed = edges[e];
  if (ed.tri[0] == k) return 1.0;
  if (ed.tri[1] == k) return -1.0;
  throw Error("mesh: edge does not belong to element");
}

Eigen::Vector3d Triangulation::barycentric(int k, const Vec2& x) const {
  const auto& tri = triangles[k];
  const Vec2 p0 = vertices[tri[0]], p1 = vertices[tri[1]], p2 = vertices[tri[2]];
  Eigen::Matrix2d a;
  a.col(0) = p1 - p0;
  a.col(1) = p2 - p0;
  const Vec2 lm = a.inverse() * (x - p0);
  return {1.0 - lm.x() - lm.y(), lm.x(), lm.y()};
}

bool Triangulation::contains(int k, const Vec2& x, double tol) const {
  const Eigen::Vector3d l = barycentric(k, x);
  return l.minCoeff() >= -tol;
}

double Triangulation::max_edge_length() const {
  double h = 0.0;
  for (int k = 0; k < num_triangles(); ++k) {
    const auto& tri = triangles[k];
    for (int i = 0; i < 3; ++i)
      h = std::max(h, (vertices[tri[(i + 1) % 3]] - vertices[tri[i]]).norm());
  }
  return h;
}

Triangulation build_domain(const DomainSpec& spec, int level) {
  if (level < 1) throw Error("mesh: level must be >= 1");
  Triangulation t = level_one(spec);
  for (int l = 1; l < level; ++l) t = uniform_refine(t);
  return t;
}

Triangulation build_domain(DomainKind kind, int level) {
  return build_domain(DomainSpec::make(kind), level);
}

Triangulation uniform_refine(const Triangulation& t) {
  Triangulation r;
  r.domain = t.domain;
  r.level = t.level + 1;
  r.vertices = t.vertices;
  // Midpoint of parent edge e becomes vertex V + e.
  const int nv = t.num_vertices();
  for (int e = 0; e < t.num_edges(); ++e) r.vertices.push_back(t.edge_midpoint(e));
  r.triangles.reserve(4 * t.triangles.size());
  r.parent_map.reserve(4 * t.triangles.size());
  for (int k = 0; k < t.num_triangles(); ++k) {
    const auto& tri = t.triangles[k];
    const int m0 = nv + t.tri_edges[k][0];  // midpoint opposite vertex 0
    const int m1 = nv + t.tri_edges[k][1];
    const int m2 = nv + t.tri_edges[k][2];
    r.triangles.push_back({tri[0], m2, m1});
    r.triangles.push_back({tri[1], m0, m2});
    r.triangles.push_back({tri[2], m1, m0});
    r.triangles.push_back({m0, m1, m2});
    for (int c = 0; c < 4; ++c) r.parent_map.push_back(k);
  }
  check_orientation(r);
  derive_edges(r);
  return r;
}

ElementGeometry element_geometry(const Triangulation& t, int k) {
  const auto& tri = t.triangles[k];
  const Vec2 p[3] = {t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]};
  ElementGeometry g;
  g.centroid = (p[0] + p[1] + p[2]) / 3.0;
  const Vec2 d1 = p[1] - p[0], d2 = p[2] - p[0];
  g.area = 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
  if (g.area <= 0.0) throw Error("mesh: degenerate or misoriented element");
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = p[(i + 1) % 3], b = p[(i + 2) % 3];
    const Vec2 e = b - a;
    g.edge_length[i] = e.norm();
    g.height[i] = 2.0 * g.area / g.edge_length[i];
    Vec2 n(e.y(), -e.x());
    n.normalize();
    if (n.dot(p[i] - a) > 0.0) n = -n;
    g.normal[i] = n;
    g.H_K += g.edge_length[i] * g.edge_length[i];
  }
  for (int i = 0; i < 3; ++i) {
    g.B_K += 2.0 * p[i].x() * p[i].y();
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double dx = p[i].x() - p[j].x();
      const double dy = p[i].y() - p[j].y();
      // Unordered vertex pairs; this normalization is the one that makes the
      // quadratic interpolation-remainder identity hold exactly.
      g.A_K += 0.5 * (dx * dx - dy * dy);
      g.B_K -= p[i].x() * p[j].y();
    }
  }
  return g;
}

bool check_uniform(const Triangulation& t) {
  for (int e = 0; e < t.num_edges(); ++e) {
    const Edge& ed = t.edges[e];
    if (ed.boundary()) continue;
    Vec2 opp[2];
    for (int s = 0; s < 2; ++s) {
      const auto& tri = t.triangles[ed.tri[s]];
      for (int i = 0; i < 3; ++i)
        if (tri[i] != ed.v0 && tri[i] != ed.v1) opp[s] = t.vertices[tri[i]];
    }
    const Vec2 sum = t.vertices[ed.v0] + t.vertices[ed.v1];
    const double h = t.edge_length(e);
    if ((opp[0] + opp[1] - sum).norm() > 1e-9 * h) return false;
  }
  return true;
}

void write_mesh(std::ostream& os, const Triangulation& t) {
  os.precision(17);
  os << "domain " << to_string(t.domain.kind) << "\n";
  os << "level " << t.level << "\n";
  os << "nodes " << t.num_vertices() << "\n";
  std::vector<int> tag(t.vertices.size(), -1);
  for (const Edge& e : t.edges) {
    if (!e.boundary()) continue;
    for (int v : {e.v0, e.v1})
      tag[v] = tag[v] < 0 ? e.boundary_label : std::min(tag[v], e.boundary_label);
  }
  for (int v = 0; v < t.num_vertices(); ++v)
    os << v << " " << t.vertices[v].x() << " " << t.vertices[v].y() << " " << tag[v] << "\n";
  os << "elements " << t.num_triangles() << "\n";
  for (int k = 0; k < t.num_triangles(); ++k) {
    const auto& tri = t.triangles[k];
    os << k << " " << tri[0] << " " << tri[1] << " " << tri[2] << "\n";
  }
}

Triangulation read_mesh(std::istream& is) {
  Triangulation t;
  std::string key, domain_name;
  int count = 0;
  if (!(is >> key >> domain_name) || key != "domain") throw Error("mesh file: expected domain header");
  t.domain = DomainSpec::make(parse_domain_kind(domain_name));
  if (!(is >> key >> t.level) || key != "level") throw Error("mesh file: expected level header");
  if (!(is >> key >> count) || key != "nodes") throw Error("mesh file: expected node section");
  t.vertices.resize(count);
  std::vector<int> tags(count, -1);
  for (int i = 0; i < count; ++i) {
    int idx;
    double x, y;
    if (!(is >> idx >> x >> y >> tags[i]) || idx != i) throw Error("mesh file: bad node record");
    t.vertices[i] = Vec2(x, y);
  }
  if (!(is >> key >> count) || key != "elements") throw Error("mesh file: expected element section");
  t.triangles.resize(count);
  for (int i = 0; i < count; ++i) {
    int idx;
    std::array<int, 3>& tri = t.triangles[i];
    if (!(is >> idx >> tri[0] >> tri[1] >> tri[2]) || idx != i) throw Error("mesh file: bad element record");
    for (int v : tri)
      if (v < 0 || v >= t.num_vertices()) throw Error("mesh file: element references missing node");
  }
  check_orientation(t);
  derive_edges(t);
  return t;
}

}  // namespace supereig
