#include "quinpi/gmsh_io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unordered_map>

#include "quinpi/errors.hpp"

namespace quinpi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty()) return true;
  }
  return false;
}

void expect_end(std::istream& in, const std::string& section) {
  std::string line;
  if (!next_line(in, line) || line != "$End" + section) {
    throw ParseError("section " + section + ": missing $End" + section);
  }
}

long read_count(std::istream& in, const std::string& section) {
  std::string line;
  if (!next_line(in, line)) throw ParseError("section " + section + ": missing entry count");
  std::istringstream ss(line);
  long n = -1;
  if (!(ss >> n) || n < 0) throw ParseError("section " + section + ": bad entry count '" + line + "'");
  return n;
}

Rect bounding_box(const std::vector<Vec2>& v) {
  Rect r{std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest(),
         std::numeric_limits<double>::max(), std::numeric_limits<double>::lowest()};
  for (const Vec2& p : v) {
    r.x0 = std::min(r.x0, p.x);
    r.x1 = std::max(r.x1, p.x);
    r.y0 = std::min(r.y0, p.y);
    r.y1 = std::max(r.y1, p.y);
  }
  return r;
}

}  // namespace

GmshData parse_gmsh(std::istream& in) {
  GmshData data;
  std::unordered_map<long, int> node_index;
  bool have_format = false;
  bool have_nodes = false;
  bool have_elements = false;
  std::string line;
  while (next_line(in, line)) {
    if (line == "$MeshFormat") {
      if (!next_line(in, line)) throw ParseError("section MeshFormat: truncated");
      std::istringstream ss(line);
      double version = 0.0;
      int file_type = -1;
      if (!(ss >> version >> file_type)) throw ParseError("section MeshFormat: malformed header '" + line + "'");
      if (version < 2.0 || version >= 3.0) {
        throw ParseError("section MeshFormat: unsupported version " + std::to_string(version));
      }
      if (file_type != 0) throw ParseError("section MeshFormat: only ASCII files are supported");
      expect_end(in, "MeshFormat");
      have_format = true;
    } else if (line == "$PhysicalNames") {
      const long n = read_count(in, "PhysicalNames");
      for (long k = 0; k < n; ++k) {
        if (!next_line(in, line)) throw ParseError("section PhysicalNames: truncated");
        std::istringstream ss(line);
        int dim = 0;
        int tag = 0;
        std::string name;
        if (!(ss >> dim >> tag)) throw ParseError("section PhysicalNames: malformed entry '" + line + "'");
        std::getline(ss, name);
        name = trim(name);
        if (name.size() >= 2 && name.front() == '"' && name.back() == '"') name = name.substr(1, name.size() - 2);
        data.physical_names[tag] = name;
      }
      expect_end(in, "PhysicalNames");
    } else if (line == "$Nodes") {
      const long n = read_count(in, "Nodes");
      data.vertices.reserve(n);
      for (long k = 0; k < n; ++k) {
        if (!next_line(in, line)) throw ParseError("section Nodes: truncated");
        std::istringstream ss(line);
        long id = 0;
        double x = 0.0, y = 0.0, z = 0.0;
        if (!(ss >> id >> x >> y >> z)) throw ParseError("section Nodes: malformed node '" + line + "'");
        node_index[id] = static_cast<int>(data.vertices.size());
        data.vertices.push_back({x, y});
      }
      expect_end(in, "Nodes");
      have_nodes = true;
    } else if (line == "$Elements") {
      if (!have_nodes) throw ParseError("section Elements: appears before $Nodes");
      const long n = read_count(in, "Elements");
      auto node = [&](long id) {
        auto it = node_index.find(id);
        if (it == node_index.end()) throw ParseError("section Elements: unknown node " + std::to_string(id));
        return it->second;
      };
      for (long k = 0; k < n; ++k) {
        if (!next_line(in, line)) throw ParseError("section Elements: truncated");
        std::istringstream ss(line);
        long id = 0;
        int type = 0;
        int ntags = 0;
        if (!(ss >> id >> type >> ntags)) throw ParseError("section Elements: malformed element '" + line + "'");
        std::vector<int> tags(std::max(ntags, 0));
        for (int& t : tags) {
          if (!(ss >> t)) throw ParseError("section Elements: missing tags in '" + line + "'");
        }
        int nodes = 0;
        switch (type) {
          case 1:
            nodes = 2;
            break;
          case 2:
            nodes = 3;
            break;
          case 15:
            nodes = 1;
            break;
          default:
            throw ParseError("section Elements: unsupported element type " + std::to_string(type));
        }
        std::vector<int> ids(nodes);
        for (int& v : ids) {
          long raw = 0;
          if (!(ss >> raw)) throw ParseError("section Elements: missing nodes in '" + line + "'");
          v = node(raw);
        }
        if (type == 1) {
          data.lines.push_back({ids[0], ids[1], tags.empty() ? -1 : tags[0]});
        } else if (type == 2) {
          data.triangles.push_back(ids);
        }
      }
      expect_end(in, "Elements");
      have_elements = true;
    } else if (!line.empty() && line[0] == '$' && line.rfind("$End", 0) != 0) {
      // Unknown section: skip to its end marker.
      const std::string name = line.substr(1);
      while (next_line(in, line) && line != "$End" + name) {
      }
    }
  }
  if (!have_format) throw ParseError("section MeshFormat: missing");
  if (!have_nodes) throw ParseError("section Nodes: missing");
  if (!have_elements) throw ParseError("section Elements: missing");
  if (data.triangles.empty()) throw ParseError("section Elements: no triangle elements");
  return data;
}

Mesh mesh_from_gmsh(const GmshData& data, const GmshImportOptions& options) {
  std::map<std::pair<int, int>, int> line_tags;
  for (const GmshLine& l : data.lines) line_tags[std::minmax(l.a, l.b)] = l.physical;

  MeshAssemblyOptions opts;
  opts.domain = bounding_box(data.vertices);
  opts.periodic_x = options.periodic_x;
  opts.periodic_y = options.periodic_y;
  opts.edge_tag = [line_tags](int a, int b) {
    auto it = line_tags.find({a, b});
    return it == line_tags.end() ? -1 : it->second;
  };
  const BoundaryClassifier sides = side_classifier(opts.domain, options.sides);
  const auto names = data.physical_names;
  opts.classify = [sides, names](Vec2 mid, Vec2 normal, int tag) -> std::pair<BoundaryKind, int> {
    auto it = names.find(tag);
    if (it != names.end()) {
      try {
        const BoundaryKind kind = boundary_kind_from_string(it->second);
        if (kind != BoundaryKind::periodic) return {kind, tag};
      } catch (const ConfigError&) {
        // Not a kind name; fall back to the side rule.
      }
    }
    return sides(mid, normal, tag);
  };
  return assemble_mesh(data.vertices, data.triangles, opts);
}

Mesh import_gmsh(const std::string& path, const GmshImportOptions& options) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  return mesh_from_gmsh(parse_gmsh(in), options);
}

void write_gmsh(const std::string& path, const std::vector<Vec2>& vertices,
                const std::vector<std::vector<int>>& triangles) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file '" + path + "'");
  const Rect box = bounding_box(vertices);
  const double tol = 1e-9 * std::max(box.width(), box.height());

  std::map<std::pair<int, int>, int> count;
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) ++count[std::minmax(t[k], t[(k + 1) % 3])];
  std::vector<std::pair<std::pair<int, int>, int>> boundary;
  for (const auto& [key, c] : count) {
    if (c != 1) continue;
    const Vec2 m = 0.5 * (vertices[key.first] + vertices[key.second]);
    int side = 0;
    if (std::abs(m.x - box.x0) < tol) side = 1;
    else if (std::abs(m.x - box.x1) < tol) side = 2;
    else if (std::abs(m.y - box.y0) < tol) side = 3;
    else if (std::abs(m.y - box.y1) < tol) side = 4;
    boundary.push_back({key, side});
  }

  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";
  out << "$Nodes\n" << vertices.size() << "\n" << std::setprecision(17);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    out << k + 1 << ' ' << vertices[k].x << ' ' << vertices[k].y << " 0\n";
  }
  out << "$EndNodes\n$Elements\n" << boundary.size() + triangles.size() << "\n";
  std::size_t id = 1;
  for (const auto& [key, side] : boundary) {
    out << id++ << " 1 2 " << side << ' ' << side << ' ' << key.first + 1 << ' ' << key.second + 1 << "\n";
  }
  for (const auto& t : triangles) {
    out << id++ << " 2 2 0 1 " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << "\n";
  }
  out << "$EndElements\n";
  if (!out) throw std::runtime_error("error while writing mesh file '" + path + "'");
}

}  // namespace quinpi
