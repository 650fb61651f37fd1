#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "curlopt/mesh.hpp"

namespace curlopt {

// Local edges of a tet, by local vertex index.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Local faces opposite each vertex.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

struct EdgeTable {
  // Sorted lexicographically by (a, b), a < b; the position is the edge id.
  std::vector<std::pair<int, int>> edges;
  struct CellEdge {
    int edge;
    int sign;  // +1 iff the cell-local direction runs low vertex id -> high
  };
  std::vector<std::array<CellEdge, 6>> cell_to_edges;
  std::vector<uint8_t> on_boundary;  // per edge: lies on some boundary face
  int n_boundary_edges = 0;

  int n_edges() const { return static_cast<int>(edges.size()); }
};

struct FaceTable {
  struct InteriorFace {
    std::array<int, 3> v;  // sorted vertex ids
    int cell_plus;         // adjacent cell with the smaller id
    int cell_minus;
    Vec3 normal;  // unit, pointing from cell_plus into cell_minus
  };
  std::vector<InteriorFace> interior_faces;  // sorted lexicographically by v
  std::vector<std::vector<int>> cell_to_interior_faces;
};

// Deterministic edge/face numbering; audits conformity and the stored
// boundary-face set, throwing structural_error on a hanging node or a
// boundary mismatch.
std::pair<EdgeTable, FaceTable> extract_topology(const TetMesh& mesh);

}  // namespace curlopt
