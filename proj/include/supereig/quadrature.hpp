// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>

#include "supereig/mesh.hpp"

namespace supereig {

/// Degree-5 symmetric 7-point rule on the triangle. Weights sum to one and
/// are applied against the element area.
struct TriangleRule {
  static constexpr int size = 7;
  std::array<Eigen::Vector3d, size> barycentric;
  std::array<double, size> weight;

  static const TriangleRule& get();
};

/// 3-point Gauss rule on [0, 1] (degree 5), used for edge means.
struct EdgeRule {
  static constexpr int size = 3;
  std::array<double, size> point;
  std::array<double, size> weight;

  static const EdgeRule& get();
};

/// Integral of f over element k of t.
double integrate(const Triangulation& t, int k, const std::function<double(const Vec2&)>& f);

/// Mean value of f along the segment [a, b].
double edge_mean(const Vec2& a, const Vec2& b, const std::function<double(const Vec2&)>& f);

}  // namespace supereig
