#pragma once

#include <array>
#include <vector>

#include "quinpi/mesh.hpp"

namespace quinpi {

/// A quadrature node. Weights are normalised: a rule approximates the mean
/// value of a function over its element, so weights sum to one.
struct QuadNode {
  Vec2 x;
  double w = 0.0;
};

constexpr int kEdgeNodes = 2;

struct QuadratureRules {
  /// Gauss nodes per edge in the left cell's frame.
  std::vector<std::array<QuadNode, kEdgeNodes>> edge;
  /// Per cell rule exact for total degree <= 2.
  std::vector<std::vector<QuadNode>> cell;
};

/// Two-point Gauss-Legendre rule on the segment [a, b].
std::array<QuadNode, kEdgeNodes> gauss_segment(Vec2 a, Vec2 b);

/// Rule on a single cell. `degree` is 2 or 4. Parallelograms get tensor
/// Gauss rules, triangles the symmetric rules, other polygons a fan of
/// triangles around the barycenter.
std::vector<QuadNode> cell_rule(const Mesh& mesh, int cell, int degree);

QuadratureRules compute_quadratures(const Mesh& mesh);

/// Mean of f over cell `c`, shifted by `shift`, using the given rule.
template <class F>
double cell_mean(const std::vector<QuadNode>& rule, F&& f, Vec2 shift = {}) {
  double sum = 0.0;
  for (const QuadNode& q : rule) sum += q.w * f(q.x + shift);
  return sum;
}

}  // namespace quinpi
