#pragma once

#include <optional>

#include "curlopt/quadrature.hpp"
#include "curlopt/space.hpp"

namespace curlopt {

// Per-cell quadrature subdivision levels (0 = none); used by the singular
// benchmark to sharpen integration near the z-axis.
using QuadRefineFn = std::function<int(const TetMesh&, int cell)>;

inline int quad_levels(const QuadRefineFn& fn, const TetMesh& mesh, int cell) {
  return fn ? fn(mesh, cell) : 0;
}

// Galerkin matrix split into blocks acting on free and constrained DOFs:
// (A x)_free = ff * x_free + fc * x_constrained.
struct AssembledOperator {
  SpMat ff;
  SpMat fc;
};

// Matrix of (chi curl., curl.) + (c ., .) with cellwise-constant coefficients.
// Stiffness blocks are exact (constant curls); mass blocks use the exact
// quadratic barycentric integrals. Requires chi > 0 and c > 0 (SPD regime);
// throws std::domain_error otherwise.
AssembledOperator assemble_operator(const FESpace& space, const std::vector<double>& chi,
                                    const std::vector<double>& c);

// Same blocks without the positivity requirement; either coefficient may be
// empty (treated as zero). Used for auxiliary mass/coupling matrices.
AssembledOperator assemble_blocks(const FESpace& space, const std::vector<double>& chi,
                                  const std::vector<double>& c);

// Load vector (f, W_e) over free DOFs.
VecX assemble_load(const FESpace& space, const FieldFn& f,
                   const QuadRefineFn& refine = nullptr);

// Adjoint right-hand side (y_h - y_Omega, W_e) + (curl y_h - E_Omega, curl W_e)
// over free DOFs. The same quadrature loop backs tracking_cost so that the
// discrete reduced gradient is the exact derivative of the discrete cost.
VecX assemble_adjoint_rhs(const FESpace& space, const FEField& y, const FieldFn& y_Omega,
                          const FieldFn& E_Omega, const QuadRefineFn& refine = nullptr);

// 1/2 ||y_h - y_Omega||^2 + 1/2 ||curl y_h - E_Omega||^2.
double tracking_cost(const FESpace& space, const FEField& y, const FieldFn& y_Omega,
                     const FieldFn& E_Omega, const QuadRefineFn& refine = nullptr);

struct ErrorNorms {
  double l2 = 0.0;
  double curl_l2 = 0.0;
  double hcurl = 0.0;
};

ErrorNorms error_norms(const FEField& u_h, const FieldFn& exact, const FieldFn& exact_curl,
                       const QuadRefineFn& refine = nullptr);

// m_k = integral over subdomain k of kappa_k (y . p); exact (degree-2 rule).
VecX subdomain_product_integrals(const FESpace& space, const FEField& y, const FEField& p,
                                 const VecX& kappa_subdomain);

}  // namespace curlopt
