#include "curlopt/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "curlopt/topology.hpp"

namespace curlopt {

namespace {

std::array<int, 3> sorted_face(int a, int b, int c) {
  std::array<int, 3> f = {a, b, c};
  std::sort(f.begin(), f.end());
  return f;
}

// Faces with exactly one adjacent cell, as a sorted list of sorted triples.
std::vector<std::array<int, 3>> derive_boundary_faces(
    const std::vector<std::array<int, 4>>& cells) {
  std::map<std::array<int, 3>, int> count;
  for (const auto& c : cells)
    for (const auto& lf : kLocalFaces)
      ++count[sorted_face(c[lf[0]], c[lf[1]], c[lf[2]])];
  std::vector<std::array<int, 3>> boundary;
  for (const auto& [f, n] : count) {
    if (n > 2) throw structural_error("face shared by more than two cells");
    if (n == 1) boundary.push_back(f);
  }
  return boundary;
}

double signed_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

}  // namespace

int TetMesh::n_subdomains() const {
  int m = 0;
  for (int s : subdomain) m = std::max(m, s);
  return m;
}

double TetMesh::cell_volume(int c) const {
  const auto& t = cells[c];
  return signed_volume(vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]);
}

double TetMesh::cell_diameter(int c) const {
  const auto& t = cells[c];
  double d2 = 0.0;
  for (const auto& e : kLocalEdges)
    d2 = std::max(d2, (vertices[t[e[0]]] - vertices[t[e[1]]]).squaredNorm());
  return std::sqrt(d2);
}

Vec3 TetMesh::cell_centroid(int c) const {
  const auto& t = cells[c];
  return 0.25 * (vertices[t[0]] + vertices[t[1]] + vertices[t[2]] + vertices[t[3]]);
}

void TetMesh::validate() const {
  if (subdomain.size() != cells.size())
    throw structural_error("subdomain label count != cell count");
  for (int c = 0; c < n_cells(); ++c) {
    if (cell_volume(c) <= 0.0) throw structural_error("non-positive cell volume");
    if (subdomain[c] < 1) throw structural_error("subdomain labels must be >= 1");
  }
  auto derived = derive_boundary_faces(cells);
  if (derived != boundary_faces)
    throw structural_error("stored boundary faces do not match cell complex boundary");
}

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "unit_cube") return DomainKind::unit_cube;
  if (s == "lshape3d") return DomainKind::lshape3d;
  if (s == "cube_with_inner_box") return DomainKind::cube_with_inner_box;
  throw std::invalid_argument("unknown domain kind: " + s);
}

namespace {

// Axis permutations in lexicographic order with their parities.
constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
constexpr int kPermParity[6] = {+1, -1, -1, +1, +1, -1};

struct LatticeBuilder {
  // Lattice index ranges [0..nx] x [0..ny] x [0..nz], keep predicate on cubes.
  int nx, ny, nz;
  Vec3 origin;
  double h;
  std::vector<int> vertex_id;  // dense lattice -> mesh vertex id or -1

  int lat(int i, int j, int k) const { return (i * (ny + 1) + j) * (nz + 1) + k; }

  TetMesh build(const std::function<bool(int, int, int)>& keep_cube,
                const std::function<int(int, int, int)>& label_cube) {
    TetMesh mesh;
    vertex_id.assign((nx + 1) * (ny + 1) * (nz + 1), -1);
    // Vertices used by kept cubes, numbered in lattice order.
    std::vector<uint8_t> used(vertex_id.size(), 0);
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (int k = 0; k < nz; ++k) {
          if (!keep_cube(i, j, k)) continue;
          for (int di = 0; di <= 1; ++di)
            for (int dj = 0; dj <= 1; ++dj)
              for (int dk = 0; dk <= 1; ++dk) used[lat(i + di, j + dj, k + dk)] = 1;
        }
    for (int i = 0; i <= nx; ++i)
      for (int j = 0; j <= ny; ++j)
        for (int k = 0; k <= nz; ++k) {
          const int id = lat(i, j, k);
          if (used[id]) {
            vertex_id[id] = mesh.n_vertices();
            mesh.vertices.push_back(origin + h * Vec3(i, j, k));
          }
        }
    // Kuhn split of each kept cube: 6 tets around the (0,0,0)-(1,1,1) diagonal.
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j)
        for (int k = 0; k < nz; ++k) {
          if (!keep_cube(i, j, k)) continue;
          const int label = label_cube(i, j, k);
          for (int p = 0; p < 6; ++p) {
            int idx[3] = {i, j, k};
            std::array<int, 4> tet;
            tet[0] = vertex_id[lat(i, j, k)];
            for (int s = 0; s < 3; ++s) {
              ++idx[kPerms[p][s]];
              tet[s + 1] = vertex_id[lat(idx[0], idx[1], idx[2])];
            }
            if (kPermParity[p] < 0) std::swap(tet[2], tet[3]);
            mesh.cells.push_back(tet);
            mesh.subdomain.push_back(label);
          }
        }
    mesh.boundary_faces = derive_boundary_faces(mesh.cells);
    return mesh;
  }
};

}  // namespace

TetMesh build_structured_domain(DomainKind kind, int n) {
  if (n < 1) throw std::invalid_argument("build_structured_domain: n must be >= 1");
  LatticeBuilder lb;
  lb.h = 1.0 / n;
  switch (kind) {
    case DomainKind::unit_cube: {
      lb.nx = lb.ny = lb.nz = n;
      lb.origin = Vec3::Zero();
      return lb.build([](int, int, int) { return true; },
                      [](int, int, int) { return 1; });
    }
    case DomainKind::lshape3d: {
      // (-1,1)x(-1,1)x(0,1) minus the quadrant x>0, y<0.
      lb.nx = lb.ny = 2 * n;
      lb.nz = n;
      lb.origin = Vec3(-1.0, -1.0, 0.0);
      return lb.build([n](int i, int j, int) { return !(i >= n && j < n); },
                      [](int, int, int) { return 1; });
    }
    case DomainKind::cube_with_inner_box: {
      if (n % 4 != 0)
        throw std::invalid_argument(
            "build_structured_domain: cube_with_inner_box requires n to be a "
            "multiple of 4");
      lb.nx = lb.ny = lb.nz = n;
      lb.origin = Vec3::Zero();
      const double h = lb.h;
      auto label = [h](int i, int j, int k) {
        const Vec3 c = h * Vec3(i + 0.5, j + 0.5, k + 0.5);
        const double m = std::max({std::abs(c.x() - 0.5), std::abs(c.y() - 0.5),
                                   std::abs(c.z() - 0.5)});
        return m < 0.25 ? 1 : 2;
      };
      return lb.build([](int, int, int) { return true; }, label);
    }
  }
  throw std::invalid_argument("build_structured_domain: unknown kind");
}

namespace {

struct RefineState {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> cells;
  std::vector<int> labels;
  std::vector<uint8_t> alive;
  std::vector<std::vector<int>> vertex_cells;  // incidence, lazily filtered by alive
  std::map<std::pair<int, int>, int> midpoint;  // split edge -> midpoint vertex

  void add_incidence(int cell) {
    for (int v : cells[cell]) vertex_cells[v].push_back(cell);
  }

  int midpoint_of(std::pair<int, int> e) {
    auto it = midpoint.find(e);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(vertices.size());
    vertices.push_back(0.5 * (vertices[e.first] + vertices[e.second]));
    vertex_cells.emplace_back();
    midpoint.emplace(e, id);
    return id;
  }

  // Longest edge of a cell; ties break to the lexicographically smallest
  // sorted vertex pair (the smallest global edge id under lex numbering).
  std::pair<int, int> longest_edge(int c) const {
    const auto& t = cells[c];
    std::pair<int, int> best{-1, -1};
    double best_l2 = -1.0;
    for (const auto& le : kLocalEdges) {
      int a = t[le[0]], b = t[le[1]];
      if (a > b) std::swap(a, b);
      const double l2 = (vertices[a] - vertices[b]).squaredNorm();
      if (l2 > best_l2 || (l2 == best_l2 && std::make_pair(a, b) < best)) {
        best_l2 = l2;
        best = {a, b};
      }
    }
    return best;
  }

  bool has_split_edge(int c) const {
    const auto& t = cells[c];
    for (const auto& le : kLocalEdges) {
      int a = t[le[0]], b = t[le[1]];
      if (a > b) std::swap(a, b);
      if (midpoint.count({a, b})) return true;
    }
    return false;
  }

  // Bisect cell c through edge e with midpoint m; returns the two children.
  std::array<int, 2> bisect(int c, std::pair<int, int> e, int m) {
    const auto t = cells[c];
    alive[c] = 0;
    std::array<int, 4> child_a = t, child_b = t;
    for (int i = 0; i < 4; ++i) {
      if (t[i] == e.second) child_a[i] = m;
      if (t[i] == e.first) child_b[i] = m;
    }
    const int ia = static_cast<int>(cells.size());
    cells.push_back(child_a);
    labels.push_back(labels[c]);
    alive.push_back(1);
    add_incidence(ia);
    const int ib = static_cast<int>(cells.size());
    cells.push_back(child_b);
    labels.push_back(labels[c]);
    alive.push_back(1);
    add_incidence(ib);
    return {ia, ib};
  }
};

}  // namespace

TetMesh bisect_marked(const TetMesh& mesh, const std::set<int>& marked) {
  for (int c : marked)
    if (c < 0 || c >= mesh.n_cells())
      throw std::invalid_argument("bisect_marked: marked id out of range");
  if (marked.empty()) return mesh;

  RefineState st;
  st.vertices = mesh.vertices;
  st.cells = mesh.cells;
  st.labels = mesh.subdomain;
  st.alive.assign(st.cells.size(), 1);
  st.vertex_cells.resize(st.vertices.size());
  for (int c = 0; c < static_cast<int>(st.cells.size()); ++c) st.add_incidence(c);

  std::deque<int> work(marked.begin(), marked.end());
  long processed = 0;
  const long cap = 200L * (static_cast<long>(mesh.n_cells()) + marked.size() + 16);
  while (!work.empty()) {
    const int c = work.front();
    work.pop_front();
    if (!st.alive[c]) continue;
    if (++processed > cap)
      throw structural_error("bisect_marked: conforming closure did not terminate");
    const auto e = st.longest_edge(c);
    const bool fresh = !st.midpoint.count(e);
    const int m = st.midpoint_of(e);
    const auto children = st.bisect(c, e, m);
    if (fresh) {
      // Neighbors sharing the newly split edge are now non-conforming.
      std::vector<int> cand;
      for (int cc : st.vertex_cells[e.first]) {
        if (!st.alive[cc]) continue;
        const auto& t = st.cells[cc];
        if (std::find(t.begin(), t.end(), e.second) != t.end()) cand.push_back(cc);
      }
      std::sort(cand.begin(), cand.end());
      for (int cc : cand) work.push_back(cc);
    }
    for (int ch : children)
      if (st.has_split_edge(ch)) work.push_back(ch);
  }

  TetMesh out;
  out.vertices = std::move(st.vertices);
  for (int c = 0; c < static_cast<int>(st.cells.size()); ++c) {
    if (!st.alive[c]) continue;
    out.cells.push_back(st.cells[c]);
    out.subdomain.push_back(st.labels[c]);
  }
  out.boundary_faces = derive_boundary_faces(out.cells);
  return out;
}

TetMesh bisect_all(const TetMesh& mesh, int sweeps) {
  TetMesh m = mesh;
  for (int s = 0; s < sweeps; ++s) {
    std::set<int> all;
    for (int c = 0; c < m.n_cells(); ++c) all.insert(c);
    m = bisect_marked(m, all);
  }
  return m;
}

double min_dihedral_angle(const std::array<Vec3, 4>& tet) {
  // Outward unit normal of the face opposite vertex v.
  auto outward_normal = [&](int v) {
    std::array<int, 3> f;
    int idx = 0;
    for (int i = 0; i < 4; ++i)
      if (i != v) f[idx++] = i;
    Vec3 n = (tet[f[1]] - tet[f[0]]).cross(tet[f[2]] - tet[f[0]]).normalized();
    if (n.dot(tet[v] - tet[f[0]]) > 0) n = -n;
    return n;
  };
  std::array<Vec3, 4> normals;
  for (int v = 0; v < 4; ++v) normals[v] = outward_normal(v);
  double min_angle = std::numbers::pi;
  // The dihedral along edge (a,b) is between the two faces containing a and b,
  // i.e. the faces opposite the other two vertices.
  for (const auto& e : kLocalEdges) {
    int c = -1, d = -1;
    for (int i = 0; i < 4; ++i)
      if (i != e[0] && i != e[1]) (c < 0 ? c : d) = i;
    const double cosang = std::clamp(-normals[c].dot(normals[d]), -1.0, 1.0);
    min_angle = std::min(min_angle, std::acos(cosang));
  }
  return min_angle;
}

MeshQualityStats mesh_quality_stats(const TetMesh& mesh) {
  MeshQualityStats s;
  s.cell_count = mesh.n_cells();
  s.h_max = 0.0;
  s.h_min = std::numeric_limits<double>::infinity();
  s.min_dihedral = std::numbers::pi;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const double d = mesh.cell_diameter(c);
    s.h_max = std::max(s.h_max, d);
    s.h_min = std::min(s.h_min, d);
    s.min_dihedral = std::min(s.min_dihedral, min_dihedral_angle(mesh.cell_vertices(c)));
  }
  // Interior edge count doubles as the Nedelec DOF count.
  std::set<std::pair<int, int>> edges;
  for (const auto& t : mesh.cells)
    for (const auto& le : kLocalEdges) {
      int a = t[le[0]], b = t[le[1]];
      if (a > b) std::swap(a, b);
      edges.insert({a, b});
    }
  std::set<std::pair<int, int>> boundary;
  for (const auto& f : mesh.boundary_faces) {
    boundary.insert({f[0], f[1]});
    boundary.insert({f[0], f[2]});
    boundary.insert({f[1], f[2]});
  }
  s.dof_estimate = static_cast<long>(edges.size()) - static_cast<long>(boundary.size());
  return s;
}

}  // namespace curlopt
