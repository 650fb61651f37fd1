#include "curlopt/estimator.hpp"

#include <cmath>

namespace curlopt {

namespace {

std::array<Vec3, 3> face_vertices(const TetMesh& mesh, const std::array<int, 3>& f) {
  return {mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]};
}

// Integral over an interior face of |jump|^2, where the jump is evaluated by
// the callback from the plus and minus side cells.
template <typename JumpFn>
double face_jump_sq(const FESpace& space, const FaceTable::InteriorFace& f, JumpFn jump) {
  const auto q = map_to_triangle(tri_rule(4), face_vertices(space.mesh(), f.v));
  double acc = 0.0;
  for (std::size_t i = 0; i < q.points.size(); ++i)
    acc += q.weights[i] * jump(q.points[i], f).squaredNorm();
  return acc;
}

}  // namespace

std::pair<VecX, VecX> state_indicators(const FESpace& space, const ProblemData& data,
                                       const VecX& u, const FEField& y) {
  if (&y.space() != &space)
    throw std::invalid_argument("state_indicators: field/space mismatch");
  const auto& mesh = space.mesh();
  const int n = mesh.n_cells();
  const auto chi = data.chi_cellwise(mesh);
  const auto ku = data.kappa_u_cellwise(mesh, u);

  // Volume residuals. div y_h = 0 and curl(chi curl y_h) = 0 cellwise for
  // Whitney fields with cellwise-constant chi, so only data derivatives and
  // the zero-order term survive.
  VecX e1_sq = VecX::Zero(n), e2_sq = VecX::Zero(n);
  for (int c = 0; c < n; ++c) {
    const double h = mesh.cell_diameter(c);
    const auto q =
        map_to_tet(tet_rule(5), mesh.cell_vertices(c), quad_levels(data.quad_refine, mesh, c));
    double div_acc = 0.0, mom_acc = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      const double dv = data.div_f ? data.div_f(q.points[i], c) : 0.0;
      div_acc += q.weights[i] * dv * dv;
      mom_acc += q.weights[i] *
                 (data.f(q.points[i], c) - ku[c] * y.value(c, q.points[i])).squaredNorm();
    }
    e1_sq[c] += h * h * div_acc;
    e2_sq[c] += h * h * mom_acc;
  }

  // Face jumps, each integral computed once.
  for (const auto& f : space.faces().interior_faces) {
    const double jn = face_jump_sq(space, f, [&](const Vec3& x, const auto& face) {
      const Vec3 qp = data.f(x, face.cell_plus) - ku[face.cell_plus] * y.value(face.cell_plus, x);
      const Vec3 qm = data.f(x, face.cell_minus) - ku[face.cell_minus] * y.value(face.cell_minus, x);
      return Vec3(((qp - qm).dot(face.normal)) * face.normal);
    });
    const Vec3 jump_t = (chi[f.cell_plus] * y.curl(f.cell_plus) -
                         chi[f.cell_minus] * y.curl(f.cell_minus))
                            .cross(f.normal);
    const double area = triangle_area(face_vertices(mesh, f.v));
    const double jt = jump_t.squaredNorm() * area;
    for (int c : {f.cell_plus, f.cell_minus}) {
      const double h = mesh.cell_diameter(c);
      e1_sq[c] += 0.5 * h * jn;
      e2_sq[c] += 0.5 * h * jt;
    }
  }
  return {e1_sq.cwiseSqrt(), e2_sq.cwiseSqrt()};
}

std::pair<VecX, VecX> adjoint_indicators(const FESpace& space, const ProblemData& data,
                                         const VecX& u, const FEField& y, const FEField& p) {
  if (&y.space() != &space || &p.space() != &space)
    throw std::invalid_argument("adjoint_indicators: field/space mismatch");
  const auto& mesh = space.mesh();
  const int n = mesh.n_cells();
  const auto chi = data.chi_cellwise(mesh);
  const auto ku = data.kappa_u_cellwise(mesh, u);

  VecX e1_sq = VecX::Zero(n), e2_sq = VecX::Zero(n);
  for (int c = 0; c < n; ++c) {
    const double h = mesh.cell_diameter(c);
    const auto q =
        map_to_tet(tet_rule(5), mesh.cell_vertices(c), quad_levels(data.quad_refine, mesh, c));
    double div_acc = 0.0, mom_acc = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      // div(y_h - y_Omega - (kappa u) p_h) reduces to -div y_Omega cellwise.
      const double dv = data.div_y_Omega ? data.div_y_Omega(q.points[i], c) : 0.0;
      div_acc += q.weights[i] * dv * dv;
      // curl(curl y_h - E_Omega) - curl(chi curl p_h) reduces to -curl E_Omega.
      const Vec3 r = y.value(c, q.points[i]) - data.y_Omega(q.points[i], c) -
                     (data.curl_E_Omega ? data.curl_E_Omega(q.points[i], c) : Vec3::Zero()) -
                     ku[c] * p.value(c, q.points[i]);
      mom_acc += q.weights[i] * r.squaredNorm();
    }
    e1_sq[c] += h * h * div_acc;
    e2_sq[c] += h * h * mom_acc;
  }

  for (const auto& f : space.faces().interior_faces) {
    const double jn = face_jump_sq(space, f, [&](const Vec3& x, const auto& face) {
      const Vec3 qp = y.value(face.cell_plus, x) - data.y_Omega(x, face.cell_plus) -
                      ku[face.cell_plus] * p.value(face.cell_plus, x);
      const Vec3 qm = y.value(face.cell_minus, x) - data.y_Omega(x, face.cell_minus) -
                      ku[face.cell_minus] * p.value(face.cell_minus, x);
      return Vec3(((qp - qm).dot(face.normal)) * face.normal);
    });
    const double jt = face_jump_sq(space, f, [&](const Vec3& x, const auto& face) {
      const Vec3 qp = y.curl(face.cell_plus) - data.E_Omega(x, face.cell_plus) -
                      chi[face.cell_plus] * p.curl(face.cell_plus);
      const Vec3 qm = y.curl(face.cell_minus) - data.E_Omega(x, face.cell_minus) -
                      chi[face.cell_minus] * p.curl(face.cell_minus);
      return Vec3((qp - qm).cross(face.normal));
    });
    for (int c : {f.cell_plus, f.cell_minus}) {
      const double h = mesh.cell_diameter(c);
      e1_sq[c] += 0.5 * h * jn;
      e2_sq[c] += 0.5 * h * jt;
    }
  }
  return {e1_sq.cwiseSqrt(), e2_sq.cwiseSqrt()};
}

IndicatorField make_indicator_field(const std::pair<VecX, VecX>& state,
                                    const std::pair<VecX, VecX>& adjoint) {
  IndicatorField ind;
  ind.est_state =
      (state.first.array().square() + state.second.array().square()).sqrt().matrix();
  ind.est_adjoint =
      (adjoint.first.array().square() + adjoint.second.array().square()).sqrt().matrix();
  ind.total_state = std::sqrt(ind.est_state.squaredNorm());
  ind.total_adjoint = std::sqrt(ind.est_adjoint.squaredNorm());
  ind.total_ocp =
      std::sqrt(ind.total_state * ind.total_state + ind.total_adjoint * ind.total_adjoint);
  return ind;
}

EstimatorTotals total_estimator(const IndicatorField& ind) {
  EstimatorTotals t;
  t.est_state = ind.total_state;
  t.est_adjoint = ind.total_adjoint;
  t.est_ocp = std::hypot(t.est_state, t.est_adjoint);
  return t;
}

namespace {

struct CellProjections {
  Vec3 mean;         // P0 projection of v
  double div_mean;   // P0 projection of div v
};

std::vector<CellProjections> project_p0(const FESpace& space, const FieldFn& v,
                                        const ScalarFieldFn& div_v,
                                        const QuadRefineFn& refine) {
  const auto& mesh = space.mesh();
  std::vector<CellProjections> out(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto q = map_to_tet(tet_rule(5), mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    Vec3 m = Vec3::Zero();
    double dm = 0.0, vol = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      m += q.weights[i] * v(q.points[i], c);
      if (div_v) dm += q.weights[i] * div_v(q.points[i], c);
      vol += q.weights[i];
    }
    out[c] = {m / vol, dm / vol};
  }
  return out;
}

std::vector<std::vector<int>> face_neighbor_patches(const FESpace& space) {
  const auto& mesh = space.mesh();
  std::vector<std::vector<int>> patch(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) patch[c].push_back(c);
  for (const auto& f : space.faces().interior_faces) {
    patch[f.cell_plus].push_back(f.cell_minus);
    patch[f.cell_minus].push_back(f.cell_plus);
  }
  return patch;
}

}  // namespace

VecX oscillation(const FESpace& space, const FieldFn& v, const ScalarFieldFn& div_v,
                 const QuadRefineFn& refine) {
  const auto& mesh = space.mesh();
  const auto proj = project_p0(space, v, div_v, refine);
  const int n = mesh.n_cells();

  // Per-cell L2 distances to the projections.
  VecX dist(n), div_dist(n);
  for (int c = 0; c < n; ++c) {
    const auto q = map_to_tet(tet_rule(5), mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      a += q.weights[i] * (v(q.points[i], c) - proj[c].mean).squaredNorm();
      if (div_v) {
        const double d = div_v(q.points[i], c) - proj[c].div_mean;
        b += q.weights[i] * d * d;
      }
    }
    dist[c] = std::sqrt(a);
    div_dist[c] = std::sqrt(b);
  }

  VecX osc = VecX::Zero(n);
  const auto patches = face_neighbor_patches(space);
  for (int c = 0; c < n; ++c)
    for (int t : patches[c]) osc[c] += mesh.cell_diameter(t) * (dist[t] + div_dist[t]);

  for (const auto& f : space.faces().interior_faces) {
    const double jsq = face_jump_sq(space, f, [&](const Vec3& x, const auto& face) {
      const Vec3 qp = v(x, face.cell_plus) - proj[face.cell_plus].mean;
      const Vec3 qm = v(x, face.cell_minus) - proj[face.cell_minus].mean;
      return Vec3(((qp - qm).dot(face.normal)) * face.normal);
    });
    for (int c : {f.cell_plus, f.cell_minus})
      osc[c] += std::sqrt(mesh.cell_diameter(c)) * std::sqrt(jsq);
  }
  return osc;
}

VecX oscillation_curl_data(const FESpace& space, const FieldFn& E, const FieldFn& curl_E,
                           const QuadRefineFn& refine) {
  const auto& mesh = space.mesh();
  const int n = mesh.n_cells();
  const auto proj_curl = project_p0(space, curl_E ? curl_E : zero_field(), nullptr, refine);
  const auto proj_E = project_p0(space, E, nullptr, refine);

  VecX dist(n);
  for (int c = 0; c < n; ++c) {
    const auto q = map_to_tet(tet_rule(5), mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    double a = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      const Vec3 cv = curl_E ? curl_E(q.points[i], c) : Vec3::Zero();
      a += q.weights[i] * (cv - proj_curl[c].mean).squaredNorm();
    }
    dist[c] = std::sqrt(a);
  }

  VecX osc = VecX::Zero(n);
  const auto patches = face_neighbor_patches(space);
  for (int c = 0; c < n; ++c)
    for (int t : patches[c]) osc[c] += mesh.cell_diameter(t) * dist[t];

  for (const auto& f : space.faces().interior_faces) {
    const double jsq = face_jump_sq(space, f, [&](const Vec3& x, const auto& face) {
      const Vec3 qp = E(x, face.cell_plus) - proj_E[face.cell_plus].mean;
      const Vec3 qm = E(x, face.cell_minus) - proj_E[face.cell_minus].mean;
      return Vec3((qp - qm).cross(face.normal));
    });
    for (int c : {f.cell_plus, f.cell_minus})
      osc[c] += std::sqrt(mesh.cell_diameter(c)) * std::sqrt(jsq);
  }
  return osc;
}

OscillationField oscillation_field(const FESpace& space, const ProblemData& data) {
  OscillationField of;
  of.osc_f = oscillation(space, data.f, data.div_f, data.quad_refine);
  of.osc_y_Omega = oscillation(space, data.y_Omega, data.div_y_Omega, data.quad_refine);
  of.osc_E_Omega =
      oscillation_curl_data(space, data.E_Omega, data.curl_E_Omega, data.quad_refine);
  return of;
}

}  // namespace curlopt
