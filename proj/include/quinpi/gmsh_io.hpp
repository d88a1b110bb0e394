#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "quinpi/mesh.hpp"

namespace quinpi {

struct GmshLine {
  int a = -1;
  int b = -1;
  int physical = -1;
};

/// Raw contents of an MSH 2.2 ASCII file (2D part only).
struct GmshData {
  std::vector<Vec2> vertices;
  std::vector<std::vector<int>> triangles;
  std::vector<GmshLine> lines;
  std::map<int, std::string> physical_names;
};

struct GmshImportOptions {
  bool periodic_x = false;
  bool periodic_y = false;
  /// Kind for boundary edges whose physical group name is not a known kind.
  BoundarySpec sides = BoundarySpec::all(BoundaryKind::wall);
};

/// Parses $MeshFormat, $PhysicalNames, $Nodes and $Elements. Supported
/// element types: 1 (line), 2 (triangle), 15 (point, ignored).
GmshData parse_gmsh(std::istream& in);

Mesh mesh_from_gmsh(const GmshData& data, const GmshImportOptions& options = {});

Mesh import_gmsh(const std::string& path, const GmshImportOptions& options = {});

/// Writes triangles plus boundary lines tagged by rectangle side
/// (physical tags 1..4 = x_lo, x_hi, y_lo, y_hi).
void write_gmsh(const std::string& path, const std::vector<Vec2>& vertices,
                const std::vector<std::vector<int>>& triangles);

}  // namespace quinpi
