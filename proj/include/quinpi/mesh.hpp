#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "quinpi/geometry.hpp"

namespace quinpi {

enum class BoundaryKind : std::uint8_t {
  interior,
  periodic,
  wall,
  dirichlet,
};

std::string to_string(BoundaryKind kind);
BoundaryKind boundary_kind_from_string(const std::string& name);

/// Boundary conditions on the four sides of a rectangular domain. Periodic
/// sides must come in matching pairs.
struct BoundarySpec {
  BoundaryKind x_lo = BoundaryKind::periodic;
  BoundaryKind x_hi = BoundaryKind::periodic;
  BoundaryKind y_lo = BoundaryKind::periodic;
  BoundaryKind y_hi = BoundaryKind::periodic;

  static BoundarySpec all(BoundaryKind kind) { return {kind, kind, kind, kind}; }
  bool periodic_x() const { return x_lo == BoundaryKind::periodic; }
  bool periodic_y() const { return y_lo == BoundaryKind::periodic; }
};

/// Side tags used for edges of rectangular domains.
enum class Side : int { x_lo = 0, x_hi = 1, y_lo = 2, y_hi = 3, none = -1 };

struct Cell {
  std::vector<int> vertices;  // counterclockwise
  std::vector<int> edges;
  double area = 0.0;
  Vec2 barycenter;
  double diameter = 0.0;
  double h = 0.0;  // size parameter used by indicators and eps_reg
};

/// An oriented face. The normal points from `left` to `right`; for physical
/// boundaries `right == -1` and the normal points out of the domain. Endpoint
/// coordinates are in the frame of the left cell. Adding `right_offset` to a
/// left-frame point gives the same point in the right cell's frame (nonzero
/// only across periodic boundaries).
struct Edge {
  int left = -1;
  int right = -1;
  Vec2 a;
  Vec2 b;
  Vec2 normal;
  double length = 0.0;
  Vec2 right_offset;
  BoundaryKind kind = BoundaryKind::interior;
  int tag = -1;

  bool is_physical_boundary() const {
    return kind == BoundaryKind::wall || kind == BoundaryKind::dirichlet;
  }
  Vec2 midpoint() const { return 0.5 * (a + b); }
};

struct Mesh {
  std::vector<Vec2> vertices;
  std::vector<Cell> cells;
  std::vector<Edge> edges;
  /// Topological vertex id (periodic copies of a vertex share one id).
  std::vector<int> vertex_class;
  /// Cells around each topological vertex, sorted.
  std::vector<std::vector<int>> class_cells;
  /// Whether each topological vertex lies on a wall/Dirichlet boundary.
  std::vector<bool> class_on_boundary;

  Rect domain;
  bool periodic_x = false;
  bool periodic_y = false;
  double h = 0.0;  // max cell size parameter

  int num_cells() const { return static_cast<int>(cells.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  /// Translation to add to cell `j`'s geometry so it sits next to cell `i`
  /// (nearest periodic image; zero on non-periodic axes).
  Vec2 image_shift(int i, int j) const;

  /// Sign of edge e as seen from cell c: +1 if c is the left cell.
  int orientation(int edge, int cell) const { return edges[edge].left == cell ? 1 : -1; }

  /// The face neighbour across `edge` from `cell` (-1 on physical boundaries).
  int neighbor(int edge, int cell) const;

  double total_area() const;
};

/// Classifies a non-periodic boundary edge. Arguments: midpoint, outward
/// normal, physical tag read from file (-1 if none). Returns kind and tag.
using BoundaryClassifier = std::function<std::pair<BoundaryKind, int>(Vec2, Vec2, int)>;

struct MeshAssemblyOptions {
  Rect domain;
  bool periodic_x = false;
  bool periodic_y = false;
  BoundaryClassifier classify;
  /// Physical tag per polygon edge, keyed by (min vertex, max vertex); optional.
  std::function<int(int, int)> edge_tag;
};

/// Builds connectivity, periodic pairing and geometric quantities from raw
/// polygons. Orientation is normalised to counterclockwise.
Mesh assemble_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> polygons,
                   const MeshAssemblyOptions& options);

/// Classifier that maps the side of a rectangle to the kinds in `spec`.
BoundaryClassifier side_classifier(const Rect& domain, const BoundarySpec& spec);

/// nx * ny rectangles; h_i = max(dx, dy).
Mesh build_cartesian_mesh(int nx, int ny, const Rect& domain, const BoundarySpec& bc);

/// Triangulation of a jittered nx*nx grid with random diagonals, refined
/// `refinements` times by midpoint subdivision (refinements are nested).
/// Boundary vertices are not jittered, so opposite sides match for periodic
/// pairing.
struct TriangleMeshSpec {
  int n = 16;
  Rect domain{-5.0, 5.0, -5.0, 5.0};
  double jitter = 0.25;  // fraction of the grid spacing
  unsigned seed = 7;
  int refinements = 0;
  /// right: each square of an n x n grid split along a random diagonal.
  /// offset: odd rows shifted by half a spacing, giving near-equilateral
  /// triangles of valence six away from the left and right sides.
  std::string pattern = "offset";
};

struct RawTriangulation {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> triangles;
};

RawTriangulation generate_triangulation(const TriangleMeshSpec& spec);

}  // namespace quinpi
