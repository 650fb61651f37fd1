#include "curlopt/assembly.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace curlopt {

namespace {

// integral over T of lambda_a lambda_b = vol/20 (a != b), vol/10 (a == b)
inline double lambda_pair_integral(int a, int b, double vol) {
  return a == b ? vol / 10.0 : vol / 20.0;
}

void element_matrices(const FESpace& space, int c, double chi, double cc,
                      Eigen::Matrix<double, 6, 6>& el) {
  const auto& g = space.geometry(c);
  const auto& ce = space.edges().cell_to_edges[c];
  std::array<Vec3, 6> curls;
  for (int le = 0; le < 6; ++le)
    curls[le] = 2.0 * g.grad[kLocalEdges[le][0]].cross(g.grad[kLocalEdges[le][1]]);
  for (int e = 0; e < 6; ++e) {
    const int i = kLocalEdges[e][0], j = kLocalEdges[e][1];
    for (int f = e; f < 6; ++f) {
      const int k = kLocalEdges[f][0], l = kLocalEdges[f][1];
      double v = 0.0;
      if (chi != 0.0) v += chi * g.volume * curls[e].dot(curls[f]);
      if (cc != 0.0) {
        const double m = lambda_pair_integral(i, k, g.volume) * g.grad[j].dot(g.grad[l]) -
                         lambda_pair_integral(i, l, g.volume) * g.grad[j].dot(g.grad[k]) -
                         lambda_pair_integral(j, k, g.volume) * g.grad[i].dot(g.grad[l]) +
                         lambda_pair_integral(j, l, g.volume) * g.grad[i].dot(g.grad[k]);
        v += cc * m;
      }
      v *= ce[e].sign * ce[f].sign;
      el(e, f) = v;
      el(f, e) = v;
    }
  }
}

AssembledOperator assemble_impl(const FESpace& space, const std::vector<double>& chi,
                                const std::vector<double>& c) {
  const int nf = space.dim();
  const int nc = space.n_constrained();
  std::vector<Eigen::Triplet<double>> tff, tfc;
  Eigen::Matrix<double, 6, 6> el;
  for (int cell = 0; cell < space.mesh().n_cells(); ++cell) {
    const double chi_t = chi.empty() ? 0.0 : chi[cell];
    const double c_t = c.empty() ? 0.0 : c[cell];
    if (chi_t == 0.0 && c_t == 0.0) continue;
    element_matrices(space, cell, chi_t, c_t, el);
    const auto& ce = space.edges().cell_to_edges[cell];
    for (int e = 0; e < 6; ++e) {
      const int re = space.free_index(ce[e].edge);
      if (re < 0) continue;
      for (int f = 0; f < 6; ++f) {
        const int cf = space.free_index(ce[f].edge);
        if (cf >= 0)
          tff.emplace_back(re, cf, el(e, f));
        else
          tfc.emplace_back(re, space.constrained_index(ce[f].edge), el(e, f));
      }
    }
  }
  AssembledOperator op;
  op.ff.resize(nf, nf);
  op.ff.setFromTriplets(tff.begin(), tff.end());
  op.fc.resize(nf, nc);
  op.fc.setFromTriplets(tfc.begin(), tfc.end());
  return op;
}

}  // namespace

AssembledOperator assemble_operator(const FESpace& space, const std::vector<double>& chi,
                                    const std::vector<double>& c) {
  const int n = space.mesh().n_cells();
  if (static_cast<int>(chi.size()) != n || static_cast<int>(c.size()) != n)
    throw std::invalid_argument("assemble_operator: coefficient size mismatch");
  for (int i = 0; i < n; ++i)
    if (chi[i] <= 0.0 || c[i] <= 0.0)
      throw std::domain_error("assemble_operator: coefficients must be positive");
  return assemble_impl(space, chi, c);
}

AssembledOperator assemble_blocks(const FESpace& space, const std::vector<double>& chi,
                                  const std::vector<double>& c) {
  return assemble_impl(space, chi, c);
}

VecX assemble_load(const FESpace& space, const FieldFn& f, const QuadRefineFn& refine) {
  const auto& mesh = space.mesh();
  VecX b = VecX::Zero(space.dim());
  const auto& rule = tet_rule(5);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto q = map_to_tet(rule, mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    const auto& ce = space.edges().cell_to_edges[c];
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      const Vec3 fv = q.weights[i] * f(q.points[i], c);
      for (int le = 0; le < 6; ++le) {
        const int r = space.free_index(ce[le].edge);
        if (r >= 0) b[r] += fv.dot(space.whitney(c, le, q.points[i]));
      }
    }
  }
  return b;
}

VecX assemble_adjoint_rhs(const FESpace& space, const FEField& y, const FieldFn& y_Omega,
                          const FieldFn& E_Omega, const QuadRefineFn& refine) {
  const auto& mesh = space.mesh();
  VecX b = VecX::Zero(space.dim());
  const auto& rule = tet_rule(5);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto q = map_to_tet(rule, mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    const auto& ce = space.edges().cell_to_edges[c];
    const Vec3 curl_y = y.curl(c);
    std::array<Vec3, 6> curls;
    for (int le = 0; le < 6; ++le) curls[le] = space.whitney_curl(c, le);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      const Vec3 misfit = q.weights[i] * (y.value(c, q.points[i]) - y_Omega(q.points[i], c));
      const Vec3 curl_misfit = q.weights[i] * (curl_y - E_Omega(q.points[i], c));
      for (int le = 0; le < 6; ++le) {
        const int r = space.free_index(ce[le].edge);
        if (r >= 0)
          b[r] += misfit.dot(space.whitney(c, le, q.points[i])) + curl_misfit.dot(curls[le]);
      }
    }
  }
  return b;
}

double tracking_cost(const FESpace& space, const FEField& y, const FieldFn& y_Omega,
                     const FieldFn& E_Omega, const QuadRefineFn& refine) {
  const auto& mesh = space.mesh();
  const auto& rule = tet_rule(5);
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto q = map_to_tet(rule, mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    const Vec3 curl_y = y.curl(c);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      acc += q.weights[i] *
             ((y.value(c, q.points[i]) - y_Omega(q.points[i], c)).squaredNorm() +
              (curl_y - E_Omega(q.points[i], c)).squaredNorm());
    }
  }
  return 0.5 * acc;
}

ErrorNorms error_norms(const FEField& u_h, const FieldFn& exact, const FieldFn& exact_curl,
                       const QuadRefineFn& refine) {
  const auto& space = u_h.space();
  const auto& mesh = space.mesh();
  const auto& rule = tet_rule(5);
  double l2 = 0.0, curl2 = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto q = map_to_tet(rule, mesh.cell_vertices(c), quad_levels(refine, mesh, c));
    const Vec3 curl_u = u_h.curl(c);
    for (std::size_t i = 0; i < q.points.size(); ++i) {
      l2 += q.weights[i] * (u_h.value(c, q.points[i]) - exact(q.points[i], c)).squaredNorm();
      curl2 += q.weights[i] * (curl_u - exact_curl(q.points[i], c)).squaredNorm();
    }
  }
  ErrorNorms n;
  n.l2 = std::sqrt(l2);
  n.curl_l2 = std::sqrt(curl2);
  n.hcurl = std::sqrt(l2 + curl2);
  return n;
}

VecX subdomain_product_integrals(const FESpace& space, const FEField& y, const FEField& p,
                                 const VecX& kappa_subdomain) {
  const auto& mesh = space.mesh();
  VecX m = VecX::Zero(kappa_subdomain.size());
  const auto& rule = tet_rule(2);  // exact: product of two Whitney fields is quadratic
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int k = mesh.subdomain[c] - 1;
    const auto q = map_to_tet(rule, mesh.cell_vertices(c));
    double acc = 0.0;
    for (std::size_t i = 0; i < q.points.size(); ++i)
      acc += q.weights[i] * y.value(c, q.points[i]).dot(p.value(c, q.points[i]));
    m[k] += kappa_subdomain[k] * acc;
  }
  return m;
}

}  // namespace curlopt
