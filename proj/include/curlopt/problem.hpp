#pragma once

#include "curlopt/assembly.hpp"

namespace curlopt {

// Identity stamp for cache keying: every distinct ProblemData instance (and
// every copy) gets a fresh id, so cached factorizations never outlive the
// data they were built from.
struct DataStamp {
  long id;
  DataStamp();
  DataStamp(const DataStamp&);
  DataStamp& operator=(const DataStamp&);
};

// Coefficients, data, and control bounds of one control problem. chi and
// kappa are piecewise constant on the physical partition (one value per
// subdomain label), which covers all three benchmarks.
struct ProblemData {
  DataStamp stamp;
  int ell = 1;
  VecX chi;    // per subdomain, > 0
  VecX kappa;  // per subdomain, > 0
  double alpha = 1.0;
  VecX lower;  // a, 0 < a < b componentwise
  VecX upper;  // b

  FieldFn f;
  FieldFn y_Omega;
  FieldFn E_Omega;

  // Analytic derivatives of the data, used by the residual estimators.
  ScalarFieldFn div_f;
  ScalarFieldFn div_y_Omega;
  FieldFn curl_E_Omega;

  // Prescribed tangential trace on the boundary (null = homogeneous). The
  // state and adjoint share the operator but may carry different trace data.
  FieldFn dirichlet_state;
  FieldFn dirichlet_adjoint;
  // For gradient-type trace data: the potential gives exact edge circulations
  // psi(b) - psi(a), immune to quadrature error near a singular edge.
  std::function<double(const Vec3&)> dirichlet_potential_state;
  std::function<double(const Vec3&)> dirichlet_potential_adjoint;

  QuadRefineFn quad_refine;

  void validate() const;

  std::vector<double> chi_cellwise(const TetMesh& mesh) const;
  // (kappa . u) per cell
  std::vector<double> kappa_u_cellwise(const TetMesh& mesh, const VecX& u) const;
  // kappa restricted to subdomain k (zero elsewhere) per cell
  std::vector<double> kappa_indicator_cellwise(const TetMesh& mesh, int k) const;

  VecX midpoint_control() const { return 0.5 * (lower + upper); }
};

}  // namespace curlopt
