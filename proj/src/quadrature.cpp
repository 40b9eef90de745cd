// SPDX-License-Identifier: Apache-2.0

#include "supereig/quadrature.hpp"

#include <cmath>

namespace supereig {

const TriangleRule& TriangleRule::get() {
  static const TriangleRule rule = [] {
    TriangleRule r;
    const double s15 = std::sqrt(15.0);
    const double a1 = (6.0 - s15) / 21.0, w1 = (155.0 - s15) / 1200.0;
    const double a2 = (6.0 + s15) / 21.0, w2 = (155.0 + s15) / 1200.0;
    r.barycentric[0] = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    r.weight[0] = 9.0 / 40.0;
    int q = 1;
    for (const auto& [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}})
      for (int i = 0; i < 3; ++i) {
        Eigen::Vector3d b(a, a, a);
        b[i] = 1.0 - 2.0 * a;
        r.barycentric[q] = b;
        r.weight[q] = w;
        ++q;
      }
    return r;
  }();
  return rule;
}

const EdgeRule& EdgeRule::get() {
  static const EdgeRule rule = [] {
    EdgeRule r;
    const double g = std::sqrt(3.0 / 5.0);
    r.point = {0.5 * (1.0 - g), 0.5, 0.5 * (1.0 + g)};
    r.weight = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
    return r;
  }();
  return rule;
}

double integrate(const Triangulation& t, int k, const std::function<double(const Vec2&)>& f) {
  const auto& tri = t.triangles[k];
  const Vec2 p0 = t.vertices[tri[0]], p1 = t.vertices[tri[1]], p2 = t.vertices[tri[2]];
  const double area =
      0.5 * std::abs((p1 - p0).x() * (p2 - p0).y() - (p1 - p0).y() * (p2 - p0).x());
  const TriangleRule& r = TriangleRule::get();
  double sum = 0.0;
  for (int q = 0; q < TriangleRule::size; ++q) {
    const Eigen::Vector3d& b = r.barycentric[q];
    sum += r.weight[q] * f(b[0] * p0 + b[1] * p1 + b[2] * p2);
  }
  return area * sum;
}

double edge_mean(const Vec2& a, const Vec2& b, const std::function<double(const Vec2&)>& f) {
  const EdgeRule& r = EdgeRule::get();
  double sum = 0.0;
  for (int q = 0; q < EdgeRule::size; ++q) sum += r.weight[q] * f(a + r.point[q] * (b - a));
  return sum;
}

}  // namespace supereig
