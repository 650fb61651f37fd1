#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "curlopt/types.hpp"

namespace curlopt {

// Conforming tetrahedral mesh with per-cell subdomain labels. Immutable after
// construction; refinement returns a new mesh.
struct TetMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> cells;    // positively oriented
  std::vector<int> subdomain;               // labels in 1..n_subdomains
  std::vector<std::array<int, 3>> boundary_faces;  // sorted vertex triples, sorted list

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int n_subdomains() const;

  std::array<Vec3, 4> cell_vertices(int c) const {
    return {vertices[cells[c][0]], vertices[cells[c][1]], vertices[cells[c][2]],
            vertices[cells[c][3]]};
  }
  double cell_volume(int c) const;
  double cell_diameter(int c) const;  // longest edge
  Vec3 cell_centroid(int c) const;

  // Throws structural_error if an invariant is violated (orientation,
  // conformity, boundary closure, partition conformity).
  void validate() const;
};

enum class DomainKind { unit_cube, lshape3d, cube_with_inner_box };

DomainKind domain_kind_from_string(const std::string& s);

// Structured Kuhn/Freudenthal meshes of the three benchmark domains.
// n = subdivisions per unit length. For cube_with_inner_box, n must be a
// multiple of 4 so the interface of the box (0.25,0.75)^3 lies on mesh faces.
TetMesh build_structured_domain(DomainKind kind, int n);

// Longest-edge bisection of the marked cells plus recursive conforming
// closure. Ties on edge length break toward the lexicographically smallest
// sorted vertex pair, i.e. the smallest global edge id. Children inherit the
// parent subdomain label.
TetMesh bisect_marked(const TetMesh& mesh, const std::set<int>& marked);

// Refine every cell; `sweeps` successive full-marking bisections.
TetMesh bisect_all(const TetMesh& mesh, int sweeps = 1);

struct MeshQualityStats {
  double h_max = 0.0;
  double h_min = 0.0;
  double min_dihedral = 0.0;  // radians
  long cell_count = 0;
  long dof_estimate = 0;  // interior edges
};

MeshQualityStats mesh_quality_stats(const TetMesh& mesh);

// Minimum dihedral angle (radians) over the 6 edges of a single tet.
double min_dihedral_angle(const std::array<Vec3, 4>& tet);

}  // namespace curlopt
