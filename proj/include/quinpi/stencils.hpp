#pragma once

#include <vector>

#include "quinpi/mesh.hpp"

namespace quinpi {

struct StencilMember {
  int cell = -1;
  Vec2 shift;  // periodic image translation relative to the owning cell
};

struct CellStencil {
  /// Optimal stencil; element 0 is the cell itself.
  std::vector<StencilMember> opt;
  /// Vertex stencils as positions into `opt` (each contains position 0).
  std::vector<std::vector<int>> vertex;
  bool boundary = false;
};

using StencilSet = std::vector<CellStencil>;

/// Interior cells use the vertex neighbourhood; cells touching a wall or
/// Dirichlet boundary use two layers of it. Vertex stencils with fewer than
/// three cells are dropped. Throws MeshError if an optimal stencil has fewer
/// than six cells.
StencilSet build_stencils(const Mesh& mesh);

/// Cells sharing at least one vertex with `cell` (including itself), sorted.
std::vector<int> vertex_neighbourhood(const Mesh& mesh, int cell);

}  // namespace quinpi
