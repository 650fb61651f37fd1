#include "curlopt/topology.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace curlopt {

std::pair<EdgeTable, FaceTable> extract_topology(const TetMesh& mesh) {
  EdgeTable et;
  FaceTable ft;

  // Edges: unique sorted vertex pairs in lexicographic order.
  std::set<std::pair<int, int>> edge_set;
  for (const auto& t : mesh.cells)
    for (const auto& le : kLocalEdges) {
      int a = t[le[0]], b = t[le[1]];
      if (a > b) std::swap(a, b);
      edge_set.insert({a, b});
    }
  et.edges.assign(edge_set.begin(), edge_set.end());
  std::map<std::pair<int, int>, int> edge_id;
  for (int i = 0; i < et.n_edges(); ++i) edge_id[et.edges[i]] = i;

  et.cell_to_edges.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& t = mesh.cells[c];
    for (int le = 0; le < 6; ++le) {
      const int a = t[kLocalEdges[le][0]];
      const int b = t[kLocalEdges[le][1]];
      const int sign = a < b ? +1 : -1;
      et.cell_to_edges[c][le] = {edge_id.at({std::min(a, b), std::max(a, b)}), sign};
    }
  }

  // Faces and adjacency.
  std::map<std::array<int, 3>, std::vector<int>> face_cells;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& t = mesh.cells[c];
    for (const auto& lf : kLocalFaces) {
      std::array<int, 3> f = {t[lf[0]], t[lf[1]], t[lf[2]]};
      std::sort(f.begin(), f.end());
      face_cells[f].push_back(c);
    }
  }

  std::vector<std::array<int, 3>> derived_boundary;
  ft.cell_to_interior_faces.resize(mesh.n_cells());
  for (const auto& [f, cs] : face_cells) {
    if (cs.size() > 2)
      throw structural_error("extract_topology: face shared by more than two cells");
    if (cs.size() == 1) {
      derived_boundary.push_back(f);
      continue;
    }
    FaceTable::InteriorFace itf;
    itf.v = f;
    itf.cell_plus = std::min(cs[0], cs[1]);
    itf.cell_minus = std::max(cs[0], cs[1]);
    Vec3 n = (mesh.vertices[f[1]] - mesh.vertices[f[0]])
                 .cross(mesh.vertices[f[2]] - mesh.vertices[f[0]])
                 .normalized();
    // Orient from cell_plus into cell_minus.
    if (n.dot(mesh.cell_centroid(itf.cell_minus) - mesh.cell_centroid(itf.cell_plus)) < 0)
      n = -n;
    itf.normal = n;
    const int id = static_cast<int>(ft.interior_faces.size());
    ft.interior_faces.push_back(itf);
    ft.cell_to_interior_faces[itf.cell_plus].push_back(id);
    ft.cell_to_interior_faces[itf.cell_minus].push_back(id);
  }

  // A hanging node shows up as a once-shared face that the mesh does not list
  // as boundary (or vice versa).
  if (derived_boundary != mesh.boundary_faces)
    throw structural_error(
        "extract_topology: non-conforming mesh (boundary mismatch / hanging node)");

  // Boundary edge classification from boundary faces.
  et.on_boundary.assign(et.n_edges(), 0);
  for (const auto& f : mesh.boundary_faces) {
    const std::pair<int, int> fe[3] = {{f[0], f[1]}, {f[0], f[2]}, {f[1], f[2]}};
    for (const auto& e : fe) et.on_boundary[edge_id.at(e)] = 1;
  }
  et.n_boundary_edges = 0;
  for (auto b : et.on_boundary) et.n_boundary_edges += b;

  return {std::move(et), std::move(ft)};
}

}  // namespace curlopt
