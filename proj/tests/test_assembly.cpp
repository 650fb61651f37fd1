#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "curlopt/assembly.hpp"

using namespace curlopt;

namespace {

// Discrete gradient of a vertex vector: edge (a,b) carries psi_b - psi_a.
VecX discrete_gradient(const FESpace& space, const VecX& psi) {
  VecX g(space.n_edges());
  for (int e = 0; e < space.n_edges(); ++e) {
    const auto [a, b] = space.edges().edges[e];
    g[e] = psi[b] - psi[a];
  }
  return g;
}

double max_abs(const SpMat& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SpMat::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
  return v;
}

std::vector<double> ones(int n, double v = 1.0) { return std::vector<double>(n, v); }

}  // namespace

TEST_CASE("stiffness annihilates discrete gradients (kernel identity)") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 2));
  const int nc = space.mesh().n_cells();
  // stiffness-only blocks (mass coefficient zero)
  const auto K = assemble_blocks(space, ones(nc, 0.7), {});
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  const double knorm = max_abs(K.ff);
  for (int trial = 0; trial < 100; ++trial) {
    VecX psi(space.mesh().n_vertices());
    for (int i = 0; i < psi.size(); ++i) psi[i] = dist(rng);
    const VecX g = discrete_gradient(space, psi);
    VecX gf(space.dim()), gc(space.n_constrained());
    for (int e = 0; e < space.n_edges(); ++e) {
      if (space.free_index(e) >= 0)
        gf[space.free_index(e)] = g[e];
      else
        gc[space.constrained_index(e)] = g[e];
    }
    const VecX r = K.ff * gf + K.fc * gc;
    CHECK(r.norm() <= 1e-12 * knorm * g.norm());
  }
}

TEST_CASE("operator symmetry and positivity") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 2));
  const int nc = space.mesh().n_cells();
  const auto A = assemble_operator(space, ones(nc, 1.0), ones(nc, 0.3));
  const SpMat diff = SpMat(A.ff.transpose()) - A.ff;
  CHECK(max_abs(diff) == 0.0);

  const MatX dense = MatX(A.ff);
  Eigen::SelfAdjointEigenSolver<MatX> es(dense);
  CHECK(es.eigenvalues().minCoeff() > 0.0);

  // 1x1 case on the coarse cube
  const FESpace coarse(build_structured_domain(DomainKind::unit_cube, 1));
  const auto A1 = assemble_operator(coarse, ones(6, 1.0), ones(6, 1.0));
  CHECK(A1.ff.rows() == 1);
  CHECK(A1.ff.coeff(0, 0) > 0.0);
}

TEST_CASE("coefficient scaling doubles the stiffness entrywise") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 2));
  const int nc = space.mesh().n_cells();
  const auto K1 = assemble_blocks(space, ones(nc, 1.0), {});
  const auto K2 = assemble_blocks(space, ones(nc, 2.0), {});
  const SpMat diff = K2.ff - SpMat(2.0 * K1.ff);
  CHECK(max_abs(diff) <= 1e-14 * max_abs(K2.ff));
}

TEST_CASE("nonpositive coefficients are rejected") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 1));
  CHECK_THROWS_AS(assemble_operator(space, ones(6, 0.0), ones(6, 1.0)), std::domain_error);
  CHECK_THROWS_AS(assemble_operator(space, ones(6, 1.0), ones(6, -2.0)), std::domain_error);
}

TEST_CASE("load vector: zero data and quadrature-refinement oracle") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 2));
  CHECK(assemble_load(space, zero_field()).norm() == 0.0);

  // constant load cross-checked against a much finer (subdivided) quadrature
  const VecX b = assemble_load(space, constant_field(Vec3(1, 0, 0)));
  const VecX b_ref = assemble_load(space, constant_field(Vec3(1, 0, 0)),
                                   [](const TetMesh&, int) { return 2; });
  CHECK((b - b_ref).norm() <= 1e-12 * (1.0 + b_ref.norm()));

  // analytic (trigonometric) load: the default rule is close to the refined one
  FieldFn f = [](const Vec3& x, int) {
    return Vec3(std::sin(3 * x.x()), std::cos(2 * x.y()), x.z() * x.z());
  };
  const VecX c = assemble_load(space, f);
  const VecX c_ref = assemble_load(space, f, [](const TetMesh&, int) { return 3; });
  CHECK((c - c_ref).norm() <= 1e-4 * c_ref.norm());
}

TEST_CASE("adjoint rhs vanishes when the data equal the discrete field") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 2));
  std::mt19937 rng(3);
  std::normal_distribution<double> dist;
  FEField y(space);
  for (int e = 0; e < space.n_edges(); ++e) y.edge_values()[e] = dist(rng);
  FieldFn y_data = [&y](const Vec3& x, int c) { return y.value(c, x); };
  FieldFn E_data = [&y](const Vec3& x, int c) { return y.curl(c); };
  const VecX rhs = assemble_adjoint_rhs(space, y, y_data, E_data);
  CHECK(rhs.norm() <= 1e-13);
  CHECK(tracking_cost(space, y, y_data, E_data) <= 1e-15);
}

TEST_CASE("error norms: reproduction and single-DOF mass identity") {
  const FESpace space(build_structured_domain(DomainKind::unit_cube, 2));
  std::mt19937 rng(11);
  std::normal_distribution<double> dist;
  FEField w(space);
  for (int e = 0; e < space.n_edges(); ++e) w.edge_values()[e] = dist(rng);
  FieldFn exact = [&w](const Vec3& x, int c) { return w.value(c, x); };
  FieldFn exact_curl = [&w](const Vec3& x, int c) { return w.curl(c); };
  const auto norms = error_norms(w, exact, exact_curl);
  CHECK(norms.l2 <= 1e-12);
  CHECK(norms.curl_l2 <= 1e-12);
  CHECK(norms.hcurl <= 1e-12);

  // exact = 0 and a single unit DOF: l2 equals sqrt of the mass diagonal
  const auto M = assemble_blocks(space, {}, ones(space.mesh().n_cells(), 1.0));
  const int dof = space.dim() / 2;
  FEField e1(space);
  e1.edge_values()[space.free_dofs()[dof]] = 1.0;
  const auto n1 = error_norms(e1, zero_field(), zero_field());
  CHECK(n1.l2 == doctest::Approx(std::sqrt(M.ff.coeff(dof, dof))).epsilon(1e-12));
  CHECK(n1.hcurl ==
        doctest::Approx(std::sqrt(n1.l2 * n1.l2 + n1.curl_l2 * n1.curl_l2)).epsilon(1e-13));
}

TEST_CASE("subdomain product integrals match refined quadrature") {
  const FESpace space(build_structured_domain(DomainKind::cube_with_inner_box, 4));
  std::mt19937 rng(5);
  std::normal_distribution<double> dist;
  FEField y(space), p(space);
  for (int e = 0; e < space.n_edges(); ++e) {
    y.edge_values()[e] = dist(rng);
    p.edge_values()[e] = dist(rng);
  }
  VecX kappa(2);
  kappa << 1.0, 100.0;
  const VecX m = subdomain_product_integrals(space, y, p, kappa);
  const auto& rule = tet_rule(2);
  for (int k = 0; k < 2; ++k) {
    double qacc = 0.0;
    for (int c = 0; c < space.mesh().n_cells(); ++c) {
      if (space.mesh().subdomain[c] - 1 != k) continue;
      const auto q = map_to_tet(rule, space.mesh().cell_vertices(c), 1);
      for (std::size_t i = 0; i < q.points.size(); ++i)
        qacc += q.weights[i] * y.value(c, q.points[i]).dot(p.value(c, q.points[i]));
    }
    CHECK(m[k] == doctest::Approx(kappa[k] * qacc).epsilon(1e-11));
  }
}
