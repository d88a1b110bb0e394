#include "quinpi/quadrature.hpp"

#include <cmath>

#include "quinpi/errors.hpp"

namespace quinpi {

namespace {

struct RefNode {
  double a;  // barycentric weight of the second vertex
  double b;  // barycentric weight of the third vertex
  double w;
};

// Symmetric triangle rules on barycentric coordinates, weights summing to 1.
const std::vector<RefNode>& triangle_rule(int degree) {
  static const std::vector<RefNode> deg2 = {
      {1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0},
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 3.0},
      {1.0 / 6.0, 2.0 / 3.0, 1.0 / 3.0},
  };
  // Dunavant degree 4, six points.
  static const std::vector<RefNode> deg4 = [] {
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    return std::vector<RefNode>{
        {a1, a1, w1}, {1.0 - 2.0 * a1, a1, w1}, {a1, 1.0 - 2.0 * a1, w1},
        {a2, a2, w2}, {1.0 - 2.0 * a2, a2, w2}, {a2, 1.0 - 2.0 * a2, w2},
    };
  }();
  return degree <= 2 ? deg2 : deg4;
}

std::vector<std::pair<double, double>> gauss_1d(int n) {
  if (n == 2) {
    const double g = 0.5 / std::sqrt(3.0);
    return {{0.5 - g, 0.5}, {0.5 + g, 0.5}};
  }
  const double g = 0.5 * std::sqrt(0.6);
  return {{0.5 - g, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + g, 5.0 / 18.0}};
}

void append_triangle(std::vector<QuadNode>& out, Vec2 p0, Vec2 p1, Vec2 p2, double scale, int degree) {
  for (const RefNode& r : triangle_rule(degree)) {
    const Vec2 x = p0 + r.a * (p1 - p0) + r.b * (p2 - p0);
    out.push_back({x, r.w * scale});
  }
}

bool is_parallelogram(const Mesh& mesh, const Cell& c) {
  if (c.vertices.size() != 4) return false;
  const auto& v = mesh.vertices;
  const Vec2 d = (v[c.vertices[0]] + v[c.vertices[2]]) - (v[c.vertices[1]] + v[c.vertices[3]]);
  return norm(d) < 1e-12 * c.diameter;
}

}  // namespace

std::array<QuadNode, kEdgeNodes> gauss_segment(Vec2 a, Vec2 b) {
  const auto g = gauss_1d(2);
  return {QuadNode{a + g[0].first * (b - a), g[0].second}, QuadNode{a + g[1].first * (b - a), g[1].second}};
}

std::vector<QuadNode> cell_rule(const Mesh& mesh, int cell, int degree) {
  if (degree != 2 && degree != 4) throw ConfigError("cell quadrature degree must be 2 or 4");
  const Cell& c = mesh.cells[cell];
  const auto& v = mesh.vertices;
  std::vector<QuadNode> out;
  if (is_parallelogram(mesh, c)) {
    const Vec2 o = v[c.vertices[0]];
    const Vec2 e1 = v[c.vertices[1]] - o;
    const Vec2 e2 = v[c.vertices[3]] - o;
    const auto g = gauss_1d(degree == 2 ? 2 : 3);
    for (const auto& [s, ws] : g)
      for (const auto& [t, wt] : g) out.push_back({o + s * e1 + t * e2, ws * wt});
    return out;
  }
  if (c.vertices.size() == 3) {
    append_triangle(out, v[c.vertices[0]], v[c.vertices[1]], v[c.vertices[2]], 1.0, degree);
    return out;
  }
  const std::size_t n = c.vertices.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 p1 = v[c.vertices[k]];
    const Vec2 p2 = v[c.vertices[(k + 1) % n]];
    const double area = 0.5 * cross(p1 - c.barycenter, p2 - c.barycenter);
    append_triangle(out, c.barycenter, p1, p2, area / c.area, degree);
  }
  return out;
}

QuadratureRules compute_quadratures(const Mesh& mesh) {
  QuadratureRules rules;
  rules.edge.reserve(mesh.edges.size());
  for (const Edge& e : mesh.edges) rules.edge.push_back(gauss_segment(e.a, e.b));
  rules.cell.reserve(mesh.cells.size());
  for (int c = 0; c < mesh.num_cells(); ++c) rules.cell.push_back(cell_rule(mesh, c, 2));
  return rules;
}

}  // namespace quinpi
