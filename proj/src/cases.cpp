#include "curlopt/cases.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "curlopt/pde.hpp"

namespace curlopt {

namespace {

constexpr double kPi = std::numbers::pi;

VecX scalar1(double v) {
  VecX x(1);
  x[0] = v;
  return x;
}

}  // namespace

BenchmarkCase test1_smooth() {
  BenchmarkCase bc;
  bc.name = "test1";
  bc.domain = DomainKind::unit_cube;
  bc.default_n0 = 2;

  const double chi = 1.0, kappa = 0.1, alpha = 0.1;
  const double u_star = 1.0 / (2.0 * kPi * kPi);  // clamp fixed point, interior of [a, b]

  auto y_exact = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]), cz = std::cos(kPi * x[2]);
    return Vec3(cx * sy * sz, sx * cy * sz, sx * sy * cz);
  };
  // y* is a gradient field, so curl y* = 0.
  auto curl_y_exact = zero_field();

  auto p_exact = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]);
    return Vec3(-x[0] * x[0] * sy * sz, -sx * sz, -sx * sy);
  };
  auto curl_p_exact = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]), cz = std::cos(kPi * x[2]);
    return Vec3(kPi * sx * (cz - cy), kPi * sy * (cx - x[0] * x[0] * cz),
                kPi * sz * (x[0] * x[0] * cy - cx));
  };
  auto curl_curl_p = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]), cx = std::cos(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]), cy = std::cos(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]), cz = std::cos(kPi * x[2]);
    const double pi2 = kPi * kPi;
    return Vec3(-2.0 * pi2 * x[0] * x[0] * sy * sz,
                -2.0 * pi2 * sx * sz - 2.0 * kPi * x[0] * cy * sz,
                -2.0 * pi2 * sx * sy - 2.0 * kPi * x[0] * sy * cz);
  };

  ProblemData d;
  d.ell = 1;
  d.chi = scalar1(chi);
  d.kappa = scalar1(kappa);
  d.alpha = alpha;
  d.lower = scalar1(0.01);
  d.upper = scalar1(5.0);

  // State strong form: curl chi curl y* + (kappa u*) y* = f with curl y* = 0.
  d.f = [y_exact, kappa, u_star](const Vec3& x, int c) {
    return Vec3(kappa * u_star * y_exact(x, c));
  };
  d.div_f = [kappa, u_star](const Vec3& x, int) {
    // div y* = -3 pi sin sin sin
    return -3.0 * kPi * kappa * u_star * std::sin(kPi * x[0]) * std::sin(kPi * x[1]) *
           std::sin(kPi * x[2]);
  };

  // E_Omega := curl y* kills the curl data term of the adjoint; here it is 0.
  d.E_Omega = zero_field();
  d.curl_E_Omega = zero_field();

  // Adjoint strong form: curl curl p* + (kappa u*) p* = y* - y_Omega.
  d.y_Omega = [y_exact, p_exact, curl_curl_p, kappa, u_star](const Vec3& x, int c) {
    return Vec3(y_exact(x, c) - curl_curl_p(x, c) - kappa * u_star * p_exact(x, c));
  };
  d.div_y_Omega = [kappa, u_star](const Vec3& x, int) {
    const double sy = std::sin(kPi * x[1]), sz = std::sin(kPi * x[2]);
    // div y* = -3 pi sx sy sz, div curl curl p* = 0, div p* = -2x sy sz
    return -3.0 * kPi * std::sin(kPi * x[0]) * sy * sz +
           kappa * u_star * 2.0 * x[0] * sy * sz;
  };

  bc.data = std::move(d);
  bc.exact = ExactSolution{y_exact, curl_y_exact, p_exact, curl_p_exact, scalar1(u_star)};
  return bc;
}

BenchmarkCase test2_lshape() {
  BenchmarkCase bc;
  bc.name = "test2";
  bc.domain = DomainKind::lshape3d;
  bc.default_n0 = 2;

  const double chi = 1.0, kappa = 0.01, alpha = 1.0;

  // grad S with S = r^{2/3} sin(2 theta / 3), theta in [0, 3 pi / 2] measured
  // from the positive x-axis; the re-entrant edge is the z-axis.
  auto grad_S = [](const Vec3& x, int) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 < 1e-24) return Vec3(0.0, 0.0, 0.0);  // axis edges carry zero tangential data
    const double r = std::sqrt(r2);
    double theta = std::atan2(x[1], x[0]);
    if (theta < 0.0) theta += 2.0 * kPi;
    const double f = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
    return Vec3(-f * std::sin(theta / 3.0), f * std::cos(theta / 3.0), 0.0);
  };

  // u* solves u = alpha^{-1} kappa |grad S|^2-integral, clamped; the integral
  // over the L-shape reduces to (1/3) int_0^{3pi/2} R(theta)^{4/3} dtheta,
  // R = 1 / max(|cos|, |sin|), evaluated here by composite Gauss quadrature.
  const auto& gp = edge_gauss_points();
  const auto& gw = edge_gauss_weights();
  double integral = 0.0;
  const int panels = 64;
  for (int i = 0; i < panels; ++i) {
    const double a = (kPi / 4.0) * i / panels, w = (kPi / 4.0) / panels;
    for (int q = 0; q < 3; ++q) {
      const double t = a + gp[q] * w;
      integral += gw[q] * w * std::pow(std::cos(t), -4.0 / 3.0);
    }
  }
  const double grad_S_sq_integral = 6.0 * integral / 3.0;
  const double u_star = std::clamp(kappa * grad_S_sq_integral / alpha, 0.01, 1.0);

  ProblemData d;
  d.ell = 1;
  d.chi = scalar1(chi);
  d.kappa = scalar1(kappa);
  d.alpha = alpha;
  d.lower = scalar1(0.01);
  d.upper = scalar1(1.0);

  // curl y* = 0 and S is harmonic, so f = (kappa u*) y* with div f = 0.
  d.f = [grad_S, kappa, u_star](const Vec3& x, int c) {
    return Vec3(kappa * u_star * grad_S(x, c));
  };
  d.div_f = zero_scalar_field();
  d.E_Omega = zero_field();
  d.curl_E_Omega = zero_field();
  // Adjoint: (kappa u*) p* = y* - y_Omega with p* = y*.
  d.y_Omega = [grad_S, kappa, u_star](const Vec3& x, int c) {
    return Vec3((1.0 - kappa * u_star) * grad_S(x, c));
  };
  d.div_y_Omega = zero_scalar_field();

  // The exact tangential trace does not vanish on the outer boundary; it is
  // prescribed as essential data for both the state and the adjoint. The
  // potential form gives exact circulations even on edges near the axis.
  auto S_potential = [](const Vec3& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1];
    if (r2 < 1e-24) return 0.0;
    double theta = std::atan2(x[1], x[0]);
    if (theta < 0.0) theta += 2.0 * kPi;
    return std::pow(r2, 1.0 / 3.0) * std::sin(2.0 * theta / 3.0);
  };
  d.dirichlet_state = grad_S;
  d.dirichlet_adjoint = grad_S;
  d.dirichlet_potential_state = S_potential;
  d.dirichlet_potential_adjoint = S_potential;

  // Sharpened quadrature on cells touching the singular axis.
  d.quad_refine = [](const TetMesh& mesh, int cell) {
    for (int v : mesh.cells[cell]) {
      const Vec3& x = mesh.vertices[v];
      if (x[0] * x[0] + x[1] * x[1] < 1e-24) return 3;
    }
    return 0;
  };

  bc.data = std::move(d);
  bc.exact = ExactSolution{grad_S, zero_field(), grad_S, zero_field(), scalar1(u_star)};
  return bc;
}

BenchmarkCase test3_discontinuous() {
  BenchmarkCase bc;
  bc.name = "test3";
  bc.domain = DomainKind::cube_with_inner_box;
  bc.default_n0 = 4;

  ProblemData d;
  d.ell = 2;
  d.chi = VecX(2);
  d.chi << 0.0001, 1.0;  // label 1 = inner box Omega_0
  d.kappa = VecX(2);
  d.kappa << 1.0, 100.0;
  d.alpha = 1.0;
  d.lower = VecX(2);
  d.lower << 0.1, 0.1;
  d.upper = VecX(2);
  d.upper << 100.0, 100.0;

  d.f = constant_field(Vec3(1.0, 0.0, 0.0));
  d.div_f = zero_scalar_field();
  d.y_Omega = [](const Vec3& x, int) {
    const double sx = std::sin(kPi * x[0]);
    const double sy = std::sin(kPi * x[1]);
    const double sz = std::sin(kPi * x[2]);
    return Vec3(x[0] * x[0] * sy * sz, sx * sz, sx * sy);
  };
  d.div_y_Omega = [](const Vec3& x, int) {
    return 2.0 * x[0] * std::sin(kPi * x[1]) * std::sin(kPi * x[2]);
  };
  d.E_Omega = zero_field();
  d.curl_E_Omega = zero_field();

  bc.data = std::move(d);
  return bc;
}

BenchmarkCase case_by_name(const std::string& name) {
  if (name == "test1") return test1_smooth();
  if (name == "test2") return test2_lshape();
  if (name == "test3") return test3_discontinuous();
  throw std::invalid_argument("unknown case: " + name);
}

ProblemData inverse_crime_data(std::shared_ptr<const FESpace> space, const ProblemData& base,
                               double u_dagger, double lin_tol) {
  if (base.ell != 1)
    throw std::invalid_argument("inverse_crime_data: single-subdomain cases only");
  ProblemData d = base;
  VecX u(1);
  u[0] = u_dagger;
  StateOperator A(space, base, u, lin_tol);
  auto y = std::make_shared<FEField>(A.solve_state());

  // With p = c y the adjoint RHS must equal c A y = c (f, w); realizing it as
  // data gives E_Omega = curl y and y_Omega = y - c f. The gradient then
  // vanishes at u_dagger when c = alpha u_dagger / int kappa |y|^2.
  const VecX m = subdomain_product_integrals(*space, *y, *y, base.kappa);
  const double c = base.alpha * u_dagger / m[0];

  d.y_Omega = [y, c, f = base.f](const Vec3& x, int cell) {
    return Vec3(y->value(cell, x) - c * f(x, cell));
  };
  d.E_Omega = [y](const Vec3& x, int cell) { return y->curl(cell); };
  d.div_y_Omega = nullptr;
  d.curl_E_Omega = nullptr;
  d.div_f = nullptr;
  return d;
}

}  // namespace curlopt
