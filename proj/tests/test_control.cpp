#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "curlopt/cases.hpp"
#include "curlopt/control.hpp"

using namespace curlopt;

namespace {

double reduced_cost(std::shared_ptr<const FESpace> space, const ProblemData& data,
                    const VecX& u) {
  const FEField y = solve_state(space, data, u, 1e-12);
  return cost_value(*space, data, y, u);
}

// Best relative FD error over a 6-decade step sweep.
double fd_gradient_best_error(std::shared_ptr<const FESpace> space, const ProblemData& data,
                              const VecX& u) {
  const FEField y = solve_state(space, data, u, 1e-12);
  const FEField p = solve_adjoint(space, data, u, y, 1e-12);
  const VecX g = reduced_gradient(*space, data, u, y, p);
  double worst_component = 0.0;
  for (int k = 0; k < data.ell; ++k) {
    double best = 1e300;
    for (double delta : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}) {
      VecX up = u, um = u;
      up[k] += delta;
      um[k] -= delta;
      const double fd = (reduced_cost(space, data, up) - reduced_cost(space, data, um)) /
                        (2.0 * delta);
      best = std::min(best, std::abs(fd - g[k]) / std::max(1e-14, std::abs(g[k])));
    }
    worst_component = std::max(worst_component, best);
  }
  return worst_component;
}

}  // namespace

TEST_CASE("project_box") {
  VecX a(2), b(2), v(2);
  a << 0.1, 0.2;
  b << 1.0, 2.0;
  v << 0.5, 1.0;
  CHECK((project_box(v, a, b) - v).norm() == 0.0);
  v << -0.9, 3.0;
  const VecX pv = project_box(v, a, b);
  CHECK(pv[0] == 0.1);
  CHECK(pv[1] == 2.0);
  CHECK((project_box(pv, a, b) - pv).norm() == 0.0);  // idempotence
}

TEST_CASE("cost value reduces to the control term for consistent data") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));
  VecX u(1);
  u << 0.3;
  const FEField y = solve_state(space, bc.data, u);
  ProblemData consistent = bc.data;
  auto yc = std::make_shared<FEField>(y);
  consistent.y_Omega = [yc](const Vec3& x, int c) { return yc->value(c, x); };
  consistent.E_Omega = [yc](const Vec3& x, int c) { return yc->curl(c); };
  CHECK(cost_value(*space, consistent, y, u) ==
        doctest::Approx(0.5 * bc.data.alpha * u.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("gradient reduces to alpha u when the adjoint vanishes") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(1));
  VecX u(1);
  u << 1.7;
  const FEField y = solve_state(space, bc.data, u);
  const FEField p(*space);  // zero adjoint
  const VecX g = reduced_gradient(*space, bc.data, u, y, p);
  CHECK(g[0] == doctest::Approx(bc.data.alpha * u[0]).epsilon(1e-14));
}

TEST_CASE("finite-difference gradient oracle (smooth case, coarse mesh)") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unif(0.05, 2.0);
  for (int trial = 0; trial < 3; ++trial) {
    VecX u(1);
    u << unif(rng);
    CHECK(fd_gradient_best_error(space, bc.data, u) <= 1e-6);
  }
}

TEST_CASE("stationary value at the exact smooth solution") {
  // alpha^{-1} integral kappa y*.p* = 1/(2 pi^2): quadrature oracle on the
  // analytic product (two of the three terms vanish by sin/cos orthogonality)
  auto bc = test1_smooth();
  const TetMesh mesh = bc.build_mesh(2);
  const auto& rule = tet_rule(5);
  double acc = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto q = map_to_tet(rule, mesh.cell_vertices(c), 1);
    for (std::size_t i = 0; i < q.points.size(); ++i)
      acc += q.weights[i] *
             bc.exact->y(q.points[i], c).dot(bc.exact->p(q.points[i], c));
  }
  const double stationary = bc.data.kappa[0] * acc / bc.data.alpha;
  CHECK(stationary == doctest::Approx(1.0 / (2.0 * std::numbers::pi * std::numbers::pi))
                          .epsilon(1e-6));
  CHECK(bc.exact->u[0] == doctest::Approx(stationary).epsilon(1e-6));
}

TEST_CASE("ssn: inverse-crime recovery of a planted control") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));
  const double u_dagger = 0.35;
  const ProblemData data = inverse_crime_data(space, bc.data, u_dagger);
  const auto triple = ssn_solve(space, data, data.midpoint_control());
  CHECK(std::abs(triple.u[0] - u_dagger) <= 1e-7);
  CHECK(triple.report.iterations <= 10);
}

TEST_CASE("ssn: residual history contracts superlinearly at the end") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));
  const auto triple = ssn_solve(space, bc.data, bc.data.midpoint_control());
  const auto& hist = triple.report.residual_history;
  REQUIRE(hist.size() >= 3);
  CHECK(triple.report.converged);
  const double ratio_last = hist[hist.size() - 1] / hist[hist.size() - 2];
  const double ratio_prev = hist[hist.size() - 2] / hist[hist.size() - 3];
  CHECK(ratio_last < ratio_prev);

  // discrete stationarity: u = clamp of the stationary value
  const VecX s = (triple.u - triple.gradient / bc.data.alpha);
  CHECK((triple.u - project_box(s, bc.data.lower, bc.data.upper)).norm() <= 1e-7);
}

TEST_CASE("ssn rejects infeasible initial guesses") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(1));
  VecX u0(1);
  u0 << 100.0;
  CHECK_THROWS_AS(ssn_solve(space, bc.data, u0), std::domain_error);
}

TEST_CASE("reduced hessian: identity limit, symmetry, FD match") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));

  // y = 0 forces z_k = 0; with p = 0 the Hessian is alpha I.
  const FEField zero(*space);
  VecX u(1);
  u << 0.5;
  const MatX H0 = reduced_hessian(space, bc.data, u, zero, zero);
  CHECK(H0(0, 0) == doctest::Approx(bc.data.alpha).epsilon(1e-14));

  const FEField y = solve_state(space, bc.data, u, 1e-12);
  const FEField p = solve_adjoint(space, bc.data, u, y, 1e-12);
  const MatX H = reduced_hessian(space, bc.data, u, y, p, 1e-12);
  CHECK((H - H.transpose()).norm() == 0.0);

  // central differences of the analytic gradient
  double best = 1e300;
  for (double delta : {1e-3, 1e-4, 1e-5, 1e-6}) {
    VecX up = u, um = u;
    up[0] += delta;
    um[0] -= delta;
    const FEField yp = solve_state(space, bc.data, up, 1e-12);
    const FEField pp = solve_adjoint(space, bc.data, up, yp, 1e-12);
    const FEField ym = solve_state(space, bc.data, um, 1e-12);
    const FEField pm = solve_adjoint(space, bc.data, um, ym, 1e-12);
    const VecX gp = reduced_gradient(*space, bc.data, up, yp, pp);
    const VecX gm = reduced_gradient(*space, bc.data, um, ym, pm);
    const double fd = (gp[0] - gm[0]) / (2.0 * delta);
    best = std::min(best, std::abs(fd - H(0, 0)) / std::abs(H(0, 0)));
  }
  CHECK(best <= 1e-5);
}

TEST_CASE("second-order check: vacuous cone and alpha-identity Hessian") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(1));
  OptimalityTriple triple;
  triple.y = FEField(*space);
  triple.p = FEField(*space);
  triple.u = VecX(1);
  triple.u << 0.5;
  triple.gradient = VecX(1);

  // |g| > tau zeroes every direction: vacuous pass, empty free set
  triple.gradient << 1.0;
  auto chk = check_second_order(space, bc.data, triple, 1e-8, 1e-3);
  CHECK(chk.cone_empty);
  CHECK(chk.passed);
  CHECK(chk.free_set.empty());

  // zero fields give H = alpha I; for nu_floor <= alpha the check passes
  triple.gradient << 0.0;
  chk = check_second_order(space, bc.data, triple, 1e-8, bc.data.alpha);
  CHECK(!chk.cone_empty);
  CHECK(chk.nu_min == doctest::Approx(bc.data.alpha).epsilon(1e-12));
  CHECK(chk.passed);
}

TEST_CASE("variational inequality at the converged control") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));
  const auto triple = ssn_solve(space, bc.data, bc.data.midpoint_control());
  // extreme points of [a, b]
  for (double v : {bc.data.lower[0], bc.data.upper[0]})
    CHECK(triple.gradient[0] * (v - triple.u[0]) >= -1e-8);
}

TEST_CASE("cost decreases along the negative gradient (line-search sanity)") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(2));
  VecX u(1);
  u << 1.2;  // interior, far from stationary
  const FEField y = solve_state(space, bc.data, u, 1e-12);
  const FEField p = solve_adjoint(space, bc.data, u, y, 1e-12);
  const VecX g = reduced_gradient(*space, bc.data, u, y, p);
  REQUIRE(g.norm() > 1e-6);
  const double j0 = cost_value(*space, bc.data, y, u);
  for (double t : {1e-3, 1e-2}) {
    const VecX u_t = u - t * g / g.norm();
    CHECK(reduced_cost(space, bc.data, u_t) < j0);
  }
}

TEST_CASE("j'' is locally Lipschitz in the control") {
  auto bc = test1_smooth();
  auto space = build_space(bc.build_mesh(1));
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unif(0.05, 3.0);
  auto j2 = [&](double uval) {
    VecX u(1);
    u << uval;
    const FEField y = solve_state(space, bc.data, u, 1e-12);
    const FEField p = solve_adjoint(space, bc.data, u, y, 1e-12);
    return reduced_hessian(space, bc.data, u, y, p, 1e-12)(0, 0);
  };
  double C = -1.0;
  for (int pair = 0; pair < 10; ++pair) {
    const double u1 = unif(rng), u2 = unif(rng);
    if (std::abs(u1 - u2) < 1e-3) continue;
    const double lhs = std::abs(j2(u1) - j2(u2));  // |h| = 1
    const double ratio = lhs / std::abs(u1 - u2);
    if (C < 0.0)
      C = std::max(ratio, 1e-12);
    else
      CHECK(ratio <= 5.0 * C);
  }
}
