#include "quinpi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <utility>

#include "quinpi/errors.hpp"

namespace quinpi {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::interior:
      return "interior";
    case BoundaryKind::periodic:
      return "periodic";
    case BoundaryKind::wall:
      return "wall";
    case BoundaryKind::dirichlet:
      return "dirichlet";
  }
  return "unknown";
}

BoundaryKind boundary_kind_from_string(const std::string& name) {
  if (name == "periodic") return BoundaryKind::periodic;
  if (name == "wall" || name == "symmetry") return BoundaryKind::wall;
  if (name == "dirichlet" || name == "farfield") return BoundaryKind::dirichlet;
  throw ConfigError("unknown boundary kind '" + name + "'");
}

Vec2 Mesh::image_shift(int i, int j) const {
  const Vec2 d = cells[j].barycenter - cells[i].barycenter;
  Vec2 shift;
  if (periodic_x) {
    const double lx = domain.width();
    shift.x = -lx * std::round(d.x / lx);
  }
  if (periodic_y) {
    const double ly = domain.height();
    shift.y = -ly * std::round(d.y / ly);
  }
  return shift;
}

int Mesh::neighbor(int edge, int cell) const {
  const Edge& e = edges[edge];
  return e.left == cell ? e.right : e.left;
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (const Cell& c : cells) sum += c.area;
  return sum;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

double signed_area(const std::vector<Vec2>& v, const std::vector<int>& poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t k = 0; k < n; ++k) a += cross(v[poly[k]], v[poly[(k + 1) % n]]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& v, const std::vector<int>& poly, double area) {
  Vec2 c;
  const std::size_t n = poly.size();
  // Shift to the first vertex to reduce cancellation on large coordinates.
  const Vec2 o = v[poly[0]];
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 p = v[poly[k]] - o;
    const Vec2 q = v[poly[(k + 1) % n]] - o;
    const double w = cross(p, q);
    c += w * (p + q);
  }
  return o + c * (1.0 / (6.0 * area));
}

// Pairs points of `lo` with points of `hi` that agree in coordinate `key`.
template <class Key>
std::vector<std::pair<int, int>> match_by(const std::vector<int>& lo, const std::vector<int>& hi,
                                          Key key, double tol, const char* what) {
  if (lo.size() != hi.size()) {
    throw MeshError(std::string("periodic pairing failed: ") + what + " sides have " +
                    std::to_string(lo.size()) + " and " + std::to_string(hi.size()) + " entries");
  }
  std::vector<int> sorted_hi = hi;
  std::sort(sorted_hi.begin(), sorted_hi.end(), [&](int a, int b) { return key(a) < key(b); });
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(lo.size());
  for (int l : lo) {
    const double k = key(l);
    auto it = std::lower_bound(sorted_hi.begin(), sorted_hi.end(), k - tol,
                               [&](int a, double value) { return key(a) < value; });
    if (it == sorted_hi.end() || std::abs(key(*it) - k) > tol) {
      throw MeshError(std::string("periodic pairing failed: no partner on ") + what + " side");
    }
    pairs.emplace_back(l, *it);
  }
  return pairs;
}

}  // namespace

BoundaryClassifier side_classifier(const Rect& domain, const BoundarySpec& spec) {
  const double tol = 1e-9 * std::max(domain.width(), domain.height());
  return [domain, spec, tol](Vec2 mid, Vec2 /*normal*/, int file_tag) -> std::pair<BoundaryKind, int> {
    if (std::abs(mid.x - domain.x0) < tol) return {spec.x_lo, static_cast<int>(Side::x_lo)};
    if (std::abs(mid.x - domain.x1) < tol) return {spec.x_hi, static_cast<int>(Side::x_hi)};
    if (std::abs(mid.y - domain.y0) < tol) return {spec.y_lo, static_cast<int>(Side::y_lo)};
    if (std::abs(mid.y - domain.y1) < tol) return {spec.y_hi, static_cast<int>(Side::y_hi)};
    return {BoundaryKind::wall, file_tag};
  };
}

Mesh assemble_mesh(std::vector<Vec2> vertices, std::vector<std::vector<int>> polygons,
                   const MeshAssemblyOptions& options) {
  Mesh mesh;
  mesh.domain = options.domain;
  mesh.periodic_x = options.periodic_x;
  mesh.periodic_y = options.periodic_y;
  mesh.vertices = std::move(vertices);
  const auto& v = mesh.vertices;

  mesh.cells.resize(polygons.size());
  double hmax = 0.0;
  for (std::size_t c = 0; c < polygons.size(); ++c) {
    auto& poly = polygons[c];
    if (poly.size() < 3) throw MeshError("cell " + std::to_string(c) + " has fewer than 3 vertices");
    double a = signed_area(v, poly);
    if (a < 0.0) {
      std::reverse(poly.begin(), poly.end());
      a = -a;
    }
    if (!(a > 0.0)) throw MeshError("cell " + std::to_string(c) + " has zero area");
    Cell& cell = mesh.cells[c];
    cell.vertices = poly;
    cell.area = a;
    cell.barycenter = polygon_centroid(v, poly, a);
    double diam = 0.0;
    for (std::size_t p = 0; p < poly.size(); ++p)
      for (std::size_t q = p + 1; q < poly.size(); ++q) diam = std::max(diam, norm(v[poly[p]] - v[poly[q]]));
    cell.diameter = diam;
    cell.h = diam;
    hmax = std::max(hmax, diam);
  }
  const double tol = 1e-9 * hmax;

  // Faces from shared vertex pairs.
  std::vector<Edge> edges;
  std::map<std::pair<int, int>, int> lookup;
  for (std::size_t c = 0; c < polygons.size(); ++c) {
    const auto& poly = mesh.cells[c].vertices;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const int va = poly[k];
      const int vb = poly[(k + 1) % poly.size()];
      const auto key = std::minmax(va, vb);
      auto it = lookup.find(key);
      if (it == lookup.end()) {
        Edge e;
        e.left = static_cast<int>(c);
        e.a = v[va];
        e.b = v[vb];
        const Vec2 d = e.b - e.a;
        e.length = norm(d);
        e.normal = Vec2{d.y / e.length, -d.x / e.length};
        e.tag = options.edge_tag ? options.edge_tag(key.first, key.second) : -1;
        lookup.emplace(key, static_cast<int>(edges.size()));
        edges.push_back(e);
      } else {
        Edge& e = edges[it->second];
        if (e.right >= 0) throw MeshError("edge shared by more than two cells");
        e.right = static_cast<int>(c);
      }
    }
  }

  // Periodic pairing of unmatched faces by translated midpoint.
  std::vector<bool> removed(edges.size(), false);
  const Rect& dom = options.domain;
  auto pair_axis = [&](bool x_axis) {
    std::vector<int> lo;
    std::vector<int> hi;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (edges[k].right >= 0 || removed[k]) continue;
      const Vec2 m = edges[k].midpoint();
      const double coord = x_axis ? m.x : m.y;
      if (std::abs(coord - (x_axis ? dom.x0 : dom.y0)) < tol) lo.push_back(static_cast<int>(k));
      if (std::abs(coord - (x_axis ? dom.x1 : dom.y1)) < tol) hi.push_back(static_cast<int>(k));
    }
    auto key = [&](int k) { return x_axis ? edges[k].midpoint().y : edges[k].midpoint().x; };
    for (auto [l, h] : match_by(lo, hi, key, tol, x_axis ? "x" : "y")) {
      Edge& keep = edges[h];
      keep.right = edges[l].left;
      keep.kind = BoundaryKind::periodic;
      keep.right_offset = x_axis ? Vec2{-dom.width(), 0.0} : Vec2{0.0, -dom.height()};
      removed[l] = true;
    }
  };
  if (options.periodic_x) pair_axis(true);
  if (options.periodic_y) pair_axis(false);

  for (std::size_t k = 0; k < edges.size(); ++k) {
    if (removed[k]) continue;
    Edge e = edges[k];
    if (e.right < 0) {
      if (!options.classify) throw MeshError("boundary edge without classifier");
      auto [kind, tag] = options.classify(e.midpoint(), e.normal, e.tag);
      if (kind == BoundaryKind::periodic || kind == BoundaryKind::interior) {
        throw MeshError("unpaired boundary edge classified as " + to_string(kind));
      }
      e.kind = kind;
      e.tag = tag;
    } else if (e.kind != BoundaryKind::periodic) {
      e.kind = BoundaryKind::interior;
    }
    mesh.edges.push_back(e);
  }
  for (std::size_t k = 0; k < mesh.edges.size(); ++k) {
    const Edge& e = mesh.edges[k];
    mesh.cells[e.left].edges.push_back(static_cast<int>(k));
    if (e.right >= 0) mesh.cells[e.right].edges.push_back(static_cast<int>(k));
  }

  // Topological vertices.
  const int nv = static_cast<int>(v.size());
  UnionFind uf(nv);
  auto unite_axis = [&](bool x_axis) {
    std::vector<int> lo;
    std::vector<int> hi;
    for (int k = 0; k < nv; ++k) {
      const double coord = x_axis ? v[k].x : v[k].y;
      if (std::abs(coord - (x_axis ? dom.x0 : dom.y0)) < tol) lo.push_back(k);
      if (std::abs(coord - (x_axis ? dom.x1 : dom.y1)) < tol) hi.push_back(k);
    }
    auto key = [&](int k) { return x_axis ? v[k].y : v[k].x; };
    for (auto [l, h] : match_by(lo, hi, key, tol, x_axis ? "x vertex" : "y vertex")) uf.unite(l, h);
  };
  if (options.periodic_x) unite_axis(true);
  if (options.periodic_y) unite_axis(false);

  std::vector<int> class_id(nv, -1);
  int nclasses = 0;
  mesh.vertex_class.resize(nv);
  for (int k = 0; k < nv; ++k) {
    const int root = uf.find(k);
    if (class_id[root] < 0) class_id[root] = nclasses++;
    mesh.vertex_class[k] = class_id[root];
  }
  mesh.class_cells.assign(nclasses, {});
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int vert : mesh.cells[c].vertices) mesh.class_cells[mesh.vertex_class[vert]].push_back(c);
  }
  for (auto& list : mesh.class_cells) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  mesh.class_on_boundary.assign(nclasses, false);
  for (const Edge& e : mesh.edges) {
    if (!e.is_physical_boundary()) continue;
    const auto& poly = mesh.cells[e.left].vertices;
    for (int vert : poly) {
      const Vec2 p = v[vert];
      if (std::abs(cross(e.b - e.a, p - e.a)) < tol * e.length &&
          dot(p - e.a, e.b - e.a) > -tol * e.length && dot(p - e.b, e.a - e.b) > -tol * e.length) {
        mesh.class_on_boundary[mesh.vertex_class[vert]] = true;
      }
    }
  }

  mesh.h = hmax;
  return mesh;
}

Mesh build_cartesian_mesh(int nx, int ny, const Rect& domain, const BoundarySpec& bc) {
  if (nx < 1 || ny < 1) throw ConfigError("cartesian mesh needs nx, ny >= 1");
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw ConfigError("cartesian mesh domain has zero or negative extent");
  }
  if ((bc.x_lo == BoundaryKind::periodic) != (bc.x_hi == BoundaryKind::periodic) ||
      (bc.y_lo == BoundaryKind::periodic) != (bc.y_hi == BoundaryKind::periodic)) {
    throw ConfigError("periodic boundaries must be set on both opposite sides");
  }
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Last row/column pinned to the exact extent so periodic matching is exact.
      const double x = i == nx ? domain.x1 : domain.x0 + i * dx;
      const double y = j == ny ? domain.y1 : domain.y0 + j * dy;
      vertices.push_back({x, y});
    }
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(static_cast<std::size_t>(nx) * ny);
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
  }
  MeshAssemblyOptions opts;
  opts.domain = domain;
  opts.periodic_x = bc.periodic_x();
  opts.periodic_y = bc.periodic_y();
  opts.classify = side_classifier(domain, bc);
  Mesh mesh = assemble_mesh(std::move(vertices), std::move(cells), opts);
  const double size = std::max(dx, dy);
  for (Cell& c : mesh.cells) c.h = size;
  mesh.h = size;
  return mesh;
}

RawTriangulation generate_triangulation(const TriangleMeshSpec& spec) {
  if (spec.n < 1) throw ConfigError("triangulation needs n >= 1");
  const int n = spec.n;
  const double dx = spec.domain.width() / n;
  const double dy = spec.domain.height() / n;
  std::mt19937 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-0.5 * spec.jitter, 0.5 * spec.jitter);
  std::bernoulli_distribution flip(0.5);

  RawTriangulation tri;
  if (spec.pattern == "right") {
    for (int j = 0; j <= n; ++j) {
      for (int i = 0; i <= n; ++i) {
        double x = i == n ? spec.domain.x1 : spec.domain.x0 + i * dx;
        double y = j == n ? spec.domain.y1 : spec.domain.y0 + j * dy;
        if (i > 0 && i < n && j > 0 && j < n) {
          x += jitter(rng) * dx;
          y += jitter(rng) * dy;
        }
        tri.vertices.push_back({x, y});
      }
    }
    auto vid = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
        if (flip(rng)) {
          tri.triangles.push_back({a, b, c});
          tri.triangles.push_back({a, c, d});
        } else {
          tri.triangles.push_back({a, b, d});
          tri.triangles.push_back({b, c, d});
        }
      }
    }
  } else if (spec.pattern == "offset") {
    if (n % 2 != 0) throw ConfigError("offset triangulation needs an even n");
    // Row j holds ids rows[j]; odd rows get the two side vertices plus
    // n shifted interior ones.
    std::vector<std::vector<int>> rows(n + 1);
    for (int j = 0; j <= n; ++j) {
      const double y0 = j == n ? spec.domain.y1 : spec.domain.y0 + j * dy;
      const bool shifted = j % 2 == 1;
      const int count = shifted ? n + 2 : n + 1;
      for (int k = 0; k < count; ++k) {
        double x;
        if (!shifted)
          x = k == n ? spec.domain.x1 : spec.domain.x0 + k * dx;
        else
          x = k == 0 ? spec.domain.x0 : k == n + 1 ? spec.domain.x1 : spec.domain.x0 + (k - 0.5) * dx;
        double y = y0;
        const bool side = k == 0 || k == count - 1;
        if (!side && j > 0 && j < n) {
          x += jitter(rng) * dx;
          y += jitter(rng) * dy;
        }
        rows[j].push_back(static_cast<int>(tri.vertices.size()));
        tri.vertices.push_back({x, y});
      }
    }
    // Zip consecutive rows: advance along whichever row has the nearer next
    // vertex in x, emitting one counter-clockwise triangle per advance.
    for (int j = 0; j < n; ++j) {
      const auto& lo = rows[j];
      const auto& hi = rows[j + 1];
      std::size_t a = 0, b = 0;
      while (a + 1 < lo.size() || b + 1 < hi.size()) {
        const bool take_lo =
            b + 1 >= hi.size() ||
            (a + 1 < lo.size() && tri.vertices[lo[a + 1]].x <= tri.vertices[hi[b + 1]].x);
        if (take_lo) {
          tri.triangles.push_back({lo[a], lo[a + 1], hi[b]});
          ++a;
        } else {
          tri.triangles.push_back({lo[a], hi[b + 1], hi[b]});
          ++b;
        }
      }
    }
  } else {
    throw ConfigError("unknown triangulation pattern '" + spec.pattern + "'");
  }
  for (int r = 0; r < spec.refinements; ++r) {
    std::map<std::pair<int, int>, int> midpoints;
    auto mid = [&](int p, int q) {
      const auto key = std::minmax(p, q);
      auto it = midpoints.find(key);
      if (it != midpoints.end()) return it->second;
      const int id = static_cast<int>(tri.vertices.size());
      tri.vertices.push_back(0.5 * (tri.vertices[p] + tri.vertices[q]));
      midpoints.emplace(key, id);
      return id;
    };
    std::vector<std::vector<int>> refined;
    refined.reserve(tri.triangles.size() * 4);
    for (const auto& t : tri.triangles) {
      const int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
      refined.push_back({t[0], ab, ca});
      refined.push_back({ab, t[1], bc});
      refined.push_back({ca, bc, t[2]});
      refined.push_back({ab, bc, ca});
    }
    tri.triangles = std::move(refined);
  }
  return tri;
}

}  // namespace quinpi
