#pragma once

#include <optional>

#include "curlopt/problem.hpp"

namespace curlopt {

struct ExactSolution {
  FieldFn y;
  FieldFn curl_y;
  FieldFn p;
  FieldFn curl_p;
  VecX u;
};

// One benchmark problem: domain builder, data, and (when available) the exact
// optimal triple. Data are manufactured so the optimality system holds
// exactly at the stated solution, with the control closed as the clamp fixed
// point of its stationarity relation.
struct BenchmarkCase {
  std::string name;
  DomainKind domain = DomainKind::unit_cube;
  int default_n0 = 2;
  ProblemData data;
  std::optional<ExactSolution> exact;

  TetMesh build_mesh(int n) const { return build_structured_domain(domain, n); }
};

// Unit cube, trigonometric optimal state/adjoint, u* = 1/(2 pi^2).
BenchmarkCase test1_smooth();

// 3D L-shape, gradient-field solution with the r^{-1/3} line singularity
// along the z-axis; prescribed tangential trace on the outer boundary.
BenchmarkCase test2_lshape();

// Unit cube with the inner box (0.25, 0.75)^3, discontinuous chi and kappa,
// two controls, no exact solution.
BenchmarkCase test3_discontinuous();

BenchmarkCase case_by_name(const std::string& name);

// Manufactured data on a fixed space for which a planted interior control
// u_dagger solves the discrete optimality system exactly: the state at
// u_dagger becomes the target and the adjoint data are fabricated so the
// reduced gradient vanishes there (single-subdomain case).
ProblemData inverse_crime_data(std::shared_ptr<const FESpace> space, const ProblemData& base,
                               double u_dagger, double lin_tol = 1e-12);

}  // namespace curlopt
