#include "quinpi/stencils.hpp"

#include <algorithm>

#include "quinpi/errors.hpp"

namespace quinpi {

std::vector<int> vertex_neighbourhood(const Mesh& mesh, int cell) {
  std::vector<int> out;
  for (int v : mesh.cells[cell].vertices) {
    const auto& around = mesh.class_cells[mesh.vertex_class[v]];
    out.insert(out.end(), around.begin(), around.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StencilSet build_stencils(const Mesh& mesh) {
  const int n = mesh.num_cells();
  std::vector<std::vector<int>> layer1(n);
  for (int i = 0; i < n; ++i) layer1[i] = vertex_neighbourhood(mesh, i);

  StencilSet set(n);
  for (int i = 0; i < n; ++i) {
    CellStencil& st = set[i];
    const Cell& cell = mesh.cells[i];
    for (int v : cell.vertices) st.boundary = st.boundary || mesh.class_on_boundary[mesh.vertex_class[v]];

    std::vector<int> cells = layer1[i];
    if (st.boundary) {
      std::vector<int> two;
      for (int j : layer1[i]) two.insert(two.end(), layer1[j].begin(), layer1[j].end());
      std::sort(two.begin(), two.end());
      two.erase(std::unique(two.begin(), two.end()), two.end());
      cells = std::move(two);
    }
    if (cells.size() < 6) {
      throw MeshError("mesh too coarse: cell " + std::to_string(i) + " has an optimal stencil of " +
                      std::to_string(cells.size()) + " cells (need 6)");
    }
    st.opt.push_back({i, Vec2{}});
    for (int j : cells) {
      if (j != i) st.opt.push_back({j, mesh.image_shift(i, j)});
    }
    auto position = [&](int c) {
      for (std::size_t p = 0; p < st.opt.size(); ++p)
        if (st.opt[p].cell == c) return static_cast<int>(p);
      return -1;
    };
    for (int v : cell.vertices) {
      const auto& around = mesh.class_cells[mesh.vertex_class[v]];
      if (around.size() < 3) continue;
      std::vector<int> members{0};
      for (int c : around) {
        if (c != i) members.push_back(position(c));
      }
      st.vertex.push_back(std::move(members));
    }
  }
  return set;
}

}  // namespace quinpi
