#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "curlopt/topology.hpp"

using namespace curlopt;

namespace {

TetMesh single_tet() {
  TetMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)};
  m.cells = {{0, 1, 2, 3}};
  m.subdomain = {1};
  m.boundary_faces = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  return m;
}

}  // namespace

TEST_CASE("six-cell cube topology") {
  const TetMesh mesh = build_structured_domain(DomainKind::unit_cube, 1);
  const auto [edges, faces] = extract_topology(mesh);
  CHECK(edges.n_edges() == 19);
  CHECK(edges.n_boundary_edges == 18);
  CHECK(edges.n_edges() - edges.n_boundary_edges == 1);
  // 6 tets x 4 faces = 24 face slots; 12 boundary faces, so 6 interior faces.
  CHECK(faces.interior_faces.size() == 6);
  CHECK(mesh.boundary_faces.size() == 12);
}

TEST_CASE("single tet: all faces boundary") {
  const auto [edges, faces] = extract_topology(single_tet());
  CHECK(faces.interior_faces.empty());
  CHECK(edges.n_edges() == 6);
  CHECK(edges.n_boundary_edges == 6);
}

TEST_CASE("interior faces appear in exactly two cell face lists") {
  const TetMesh mesh = build_structured_domain(DomainKind::lshape3d, 1);
  const auto [edges, faces] = extract_topology(mesh);
  std::map<std::array<int, 3>, int> counts;
  for (const auto& c : mesh.cells)
    for (const auto& lf : kLocalFaces) {
      std::array<int, 3> f = {c[lf[0]], c[lf[1]], c[lf[2]]};
      std::sort(f.begin(), f.end());
      ++counts[f];
    }
  for (const auto& f : faces.interior_faces) CHECK(counts.at(f.v) == 2);
  for (const auto& f : mesh.boundary_faces) CHECK(counts.at(f) == 1);
  CHECK(counts.size() == faces.interior_faces.size() + mesh.boundary_faces.size());
}

TEST_CASE("edge ordering is deterministic and lexicographic") {
  const TetMesh mesh = build_structured_domain(DomainKind::unit_cube, 2);
  const auto [e1, f1] = extract_topology(mesh);
  const auto [e2, f2] = extract_topology(mesh);
  CHECK(e1.edges == e2.edges);
  for (int i = 1; i < e1.n_edges(); ++i) CHECK(e1.edges[i - 1] < e1.edges[i]);
  // orientation signs match the stored vertex order
  for (int c = 0; c < mesh.n_cells(); ++c)
    for (int le = 0; le < 6; ++le) {
      const int a = mesh.cells[c][kLocalEdges[le][0]];
      const int b = mesh.cells[c][kLocalEdges[le][1]];
      CHECK(e1.cell_to_edges[c][le].sign == (a < b ? 1 : -1));
      const auto& e = e1.edges[e1.cell_to_edges[c][le].edge];
      CHECK(e == std::make_pair(std::min(a, b), std::max(a, b)));
    }
}

TEST_CASE("interior face normals point from the lower to the higher cell id") {
  const TetMesh mesh = build_structured_domain(DomainKind::unit_cube, 2);
  const auto [edges, faces] = extract_topology(mesh);
  for (const auto& f : faces.interior_faces) {
    CHECK(f.cell_plus < f.cell_minus);
    CHECK(f.normal.norm() == doctest::Approx(1.0).epsilon(1e-13));
    const Vec3 d = mesh.cell_centroid(f.cell_minus) - mesh.cell_centroid(f.cell_plus);
    CHECK(f.normal.dot(d) > 0.0);
  }
}

TEST_CASE("hanging node raises a structural error") {
  // Two tets glued so one face of the big tet is split on the other side.
  TetMesh m;
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1),
                Vec3(0.5, 0.5, 0), Vec3(0, 0, -1)};
  // cell 0: base (0,1,2) with apex 3; cells 1-2: share halves of the base
  // with apex 5 -> face (0,1,2) of cell 0 is hanging.
  m.cells = {{0, 1, 2, 3}, {0, 1, 4, 5}, {0, 4, 2, 5}};
  for (auto& c : m.cells) {
    const double v = (m.vertices[c[1]] - m.vertices[c[0]])
                         .cross(m.vertices[c[2]] - m.vertices[c[0]])
                         .dot(m.vertices[c[3]] - m.vertices[c[0]]);
    if (v < 0) std::swap(c[2], c[3]);
  }
  m.subdomain = {1, 1, 1};
  m.boundary_faces.clear();  // wrong on purpose; the audit must fire
  CHECK_THROWS_AS(extract_topology(m), structural_error);
}
