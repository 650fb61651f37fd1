#pragma once

#include <memory>

#include "curlopt/mesh.hpp"
#include "curlopt/topology.hpp"

namespace curlopt {

// Lowest-order Nedelec (Whitney edge) space with one DOF per edge: the
// circulation along the edge, oriented from the lower to the higher global
// vertex id. Boundary edges are constrained (essential tangential condition);
// their values default to zero and may carry prescribed trace data.
class FESpace {
 public:
  explicit FESpace(TetMesh mesh);

  const TetMesh& mesh() const { return *mesh_; }
  std::shared_ptr<const TetMesh> mesh_ptr() const { return mesh_; }
  const EdgeTable& edges() const { return edges_; }
  const FaceTable& faces() const { return faces_; }

  int n_edges() const { return edges_.n_edges(); }
  int dim() const { return n_free_; }  // free DOFs = interior edges
  int n_constrained() const { return n_edges() - n_free_; }

  // Edge id -> free index, or -1 when constrained.
  int free_index(int edge) const { return dof_map_[edge]; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  // Edge id -> index among constrained edges (valid when free_index < 0).
  int constrained_index(int edge) const { return constrained_map_[edge]; }

  struct CellGeometry {
    std::array<Vec3, 4> grad;    // barycentric gradients
    std::array<double, 4> offset;  // lambda_i(x) = offset_i + grad_i . x
    double volume;
  };
  const CellGeometry& geometry(int cell) const { return geom_[cell]; }

  std::array<double, 4> barycentric(int cell, const Vec3& x) const {
    const auto& g = geom_[cell];
    return {g.offset[0] + g.grad[0].dot(x), g.offset[1] + g.grad[1].dot(x),
            g.offset[2] + g.grad[2].dot(x), g.offset[3] + g.grad[3].dot(x)};
  }

  // Whitney function of local edge le in `cell`, including the orientation
  // sign that aligns it with the global low->high edge direction.
  Vec3 whitney(int cell, int le, const Vec3& x) const {
    const auto& g = geom_[cell];
    const int i = kLocalEdges[le][0], j = kLocalEdges[le][1];
    const double li = g.offset[i] + g.grad[i].dot(x);
    const double lj = g.offset[j] + g.grad[j].dot(x);
    return edges_.cell_to_edges[cell][le].sign * (li * g.grad[j] - lj * g.grad[i]);
  }

  // curl of the (oriented) Whitney function; constant on the cell.
  Vec3 whitney_curl(int cell, int le) const {
    const auto& g = geom_[cell];
    const int i = kLocalEdges[le][0], j = kLocalEdges[le][1];
    return edges_.cell_to_edges[cell][le].sign * 2.0 * g.grad[i].cross(g.grad[j]);
  }

 private:
  std::shared_ptr<const TetMesh> mesh_;
  EdgeTable edges_;
  FaceTable faces_;
  std::vector<int> dof_map_;
  std::vector<int> constrained_map_;
  std::vector<int> free_dofs_;
  int n_free_ = 0;
  std::vector<CellGeometry> geom_;
};

inline std::shared_ptr<const FESpace> build_space(TetMesh mesh) {
  return std::make_shared<const FESpace>(std::move(mesh));
}

// Discrete field: one coefficient per edge (constrained entries hold the
// prescribed trace data, zero for the homogeneous condition).
class FEField {
 public:
  FEField() = default;
  explicit FEField(const FESpace& space)
      : space_(&space), values_(VecX::Zero(space.n_edges())) {}

  const FESpace& space() const { return *space_; }
  const VecX& edge_values() const { return values_; }
  VecX& edge_values() { return values_; }

  VecX free_part() const {
    VecX v(space_->dim());
    for (int i = 0; i < space_->dim(); ++i) v[i] = values_[space_->free_dofs()[i]];
    return v;
  }
  void set_free(const VecX& v) {
    for (int i = 0; i < space_->dim(); ++i) values_[space_->free_dofs()[i]] = v[i];
  }
  VecX constrained_part() const {
    VecX v(space_->n_constrained());
    for (int e = 0; e < space_->n_edges(); ++e)
      if (space_->free_index(e) < 0) v[space_->constrained_index(e)] = values_[e];
    return v;
  }
  void set_constrained(const VecX& v) {
    for (int e = 0; e < space_->n_edges(); ++e)
      if (space_->free_index(e) < 0) values_[e] = v[space_->constrained_index(e)];
  }

  Vec3 value(int cell, const Vec3& x) const {
    Vec3 v = Vec3::Zero();
    for (int le = 0; le < 6; ++le)
      v += values_[space_->edges().cell_to_edges[cell][le].edge] *
           space_->whitney(cell, le, x);
    return v;
  }
  Vec3 curl(int cell) const {
    Vec3 v = Vec3::Zero();
    for (int le = 0; le < 6; ++le)
      v += values_[space_->edges().cell_to_edges[cell][le].edge] *
           space_->whitney_curl(cell, le);
    return v;
  }

 private:
  const FESpace* space_ = nullptr;
  VecX values_;
};

// Edge interpolant: DOF = circulation of g along the edge by 3-point Gauss.
// Boundary DOFs are forced to zero unless force_boundary_zero is false (used
// to realize prescribed tangential trace data). Non-finite evaluations raise
// numeric_error naming the edge.
FEField interpolate_field(const FESpace& space, const FieldFn& g,
                          bool force_boundary_zero = true);

// Circulations of g on boundary edges only; interior entries zero.
VecX boundary_edge_values(const FESpace& space, const FieldFn& g);

// Exact circulations psi(b) - psi(a) of a gradient field on boundary edges.
VecX boundary_edge_values_from_potential(const FESpace& space,
                                         const std::function<double(const Vec3&)>& psi);

}  // namespace curlopt
