// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace supereig {

using Vec2 = Eigen::Vector2d;

enum class DomainKind { UnitSquare, PerturbedSquare, EquilateralTriangle, LShape };

DomainKind parse_domain_kind(const std::string& name);
std::string to_string(DomainKind kind);

/// Straight piece of the level-1 boundary carrying a label. Midpoints created
/// by uniform refinement stay on their segment, so labels can be recomputed
/// exactly at any level.
struct BoundarySegment {
  int label;
  Vec2 a;
  Vec2 b;
};

struct DomainSpec {
  DomainKind kind;
  std::vector<BoundarySegment> segments;

  static DomainSpec make(DomainKind kind);
};

struct Edge {
  int v0, v1;     // vertex indices, v0 < v1
  int tri[2];     // interior: tri[0] is the larger-label element; boundary: tri[1] = -1
  int boundary_label = -1;  // -1 for interior edges

  bool boundary() const { return tri[1] < 0; }
};

/// Per-element geometric quantities entering the expansion formulas.
/// Edge i is opposite vertex i; d[i] is the height onto edge i.
struct ElementGeometry {
  Vec2 centroid;
  double area = 0.0;
  std::array<double, 3> edge_length{};
  std::array<double, 3> height{};
  std::array<Vec2, 3> normal{};  // unit outward, normal[i] on edge i
  double H_K = 0.0;              // sum of squared edge lengths
  double A_K = 0.0;
  double B_K = 0.0;
};

struct Triangulation {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<Edge> edges;
  std::vector<std::array<int, 3>> tri_edges;  // tri_edges[k][i]: edge opposite vertex i
  std::vector<int> parent_map;                // child element -> parent, empty at level 1
  int level = 1;
  DomainSpec domain;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_boundary_edges() const;

  /// Unit normal of edge e: for interior edges it points from the
  /// larger-label element into the smaller one, for boundary edges outward.
  Vec2 edge_normal(int e) const;
  Vec2 edge_midpoint(int e) const;
  double edge_length(int e) const;
  /// +1 if edge_normal(e) points out of element k, -1 otherwise.
  double orientation(int k, int e) const;
  /// Barycentric coordinates of x with respect to element k.
  Eigen::Vector3d barycentric(int k, const Vec2& x) const;
  bool contains(int k, const Vec2& x, double tol = 1e-10) const;
  double max_edge_length() const;
};

Triangulation build_domain(const DomainSpec& spec, int level);
Triangulation build_domain(DomainKind kind, int level);
Triangulation uniform_refine(const Triangulation& t);
ElementGeometry element_geometry(const Triangulation& t, int k);

/// True iff every interior edge's two elements form a parallelogram
/// (reflected-vertex distance below 1e-9 times the local mesh size).
bool check_uniform(const Triangulation& t);

void write_mesh(std::ostream& os, const Triangulation& t);
Triangulation read_mesh(std::istream& is);

}  // namespace supereig
