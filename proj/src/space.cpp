#include "curlopt/space.hpp"

#include <cmath>
#include <string>

#include "curlopt/quadrature.hpp"

namespace curlopt {

FESpace::FESpace(TetMesh mesh) : mesh_(std::make_shared<TetMesh>(std::move(mesh))) {
  auto [et, ft] = extract_topology(*mesh_);
  edges_ = std::move(et);
  faces_ = std::move(ft);

  dof_map_.assign(edges_.n_edges(), -1);
  constrained_map_.assign(edges_.n_edges(), -1);
  int nc = 0;
  for (int e = 0; e < edges_.n_edges(); ++e) {
    if (edges_.on_boundary[e]) {
      constrained_map_[e] = nc++;
    } else {
      dof_map_[e] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(e);
    }
  }
  n_free_ = static_cast<int>(free_dofs_.size());

  geom_.resize(mesh_->n_cells());
  for (int c = 0; c < mesh_->n_cells(); ++c) {
    const auto t = mesh_->cell_vertices(c);
    Eigen::Matrix3d J;
    J.col(0) = t[1] - t[0];
    J.col(1) = t[2] - t[0];
    J.col(2) = t[3] - t[0];
    const Eigen::Matrix3d Jinv = J.inverse();
    CellGeometry g;
    g.volume = mesh_->cell_volume(c);
    for (int i = 1; i < 4; ++i) g.grad[i] = Jinv.row(i - 1).transpose();
    g.grad[0] = -(g.grad[1] + g.grad[2] + g.grad[3]);
    for (int i = 0; i < 4; ++i) g.offset[i] = (i == 0 ? 1.0 : 0.0) - g.grad[i].dot(t[0]);
    geom_[c] = g;
  }
}

namespace {

double edge_circulation(const FieldFn& g, const Vec3& xa, const Vec3& xb, int edge_id) {
  const auto& pts = edge_gauss_points();
  const auto& w = edge_gauss_weights();
  const Vec3 d = xb - xa;
  double dof = 0.0;
  for (int q = 0; q < 3; ++q) {
    const Vec3 x = xa + pts[q] * d;
    const Vec3 v = g(x, -1);
    if (!v.allFinite())
      throw numeric_error("interpolation: non-finite field value on edge " +
                          std::to_string(edge_id));
    dof += w[q] * v.dot(d);
  }
  return dof;
}

}  // namespace

FEField interpolate_field(const FESpace& space, const FieldFn& g,
                          bool force_boundary_zero) {
  FEField field(space);
  const auto& mesh = space.mesh();
  for (int e = 0; e < space.n_edges(); ++e) {
    if (force_boundary_zero && space.free_index(e) < 0) continue;
    const auto [a, b] = space.edges().edges[e];
    field.edge_values()[e] = edge_circulation(g, mesh.vertices[a], mesh.vertices[b], e);
  }
  return field;
}

VecX boundary_edge_values(const FESpace& space, const FieldFn& g) {
  VecX v = VecX::Zero(space.n_edges());
  const auto& mesh = space.mesh();
  for (int e = 0; e < space.n_edges(); ++e) {
    if (space.free_index(e) >= 0) continue;
    const auto [a, b] = space.edges().edges[e];
    v[e] = edge_circulation(g, mesh.vertices[a], mesh.vertices[b], e);
  }
  return v;
}

VecX boundary_edge_values_from_potential(const FESpace& space,
                                         const std::function<double(const Vec3&)>& psi) {
  VecX v = VecX::Zero(space.n_edges());
  const auto& mesh = space.mesh();
  for (int e = 0; e < space.n_edges(); ++e) {
    if (space.free_index(e) >= 0) continue;
    const auto [a, b] = space.edges().edges[e];
    v[e] = psi(mesh.vertices[b]) - psi(mesh.vertices[a]);
  }
  return v;
}

}  // namespace curlopt
