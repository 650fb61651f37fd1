#pragma once

#include <memory>

#include "curlopt/problem.hpp"

namespace curlopt {

// ||Ax - b|| <= tol ||b||; direct sparse factorization up to kDirectLimit
// unknowns, preconditioned CG above. Throws solver_error on breakdown.
inline constexpr int kDirectSolveLimit = 200000;

std::pair<VecX, SolveReport> linear_solve(const SpMat& A, const VecX& b,
                                          double tol = 1e-10);

// Number of sparse factorizations performed since process start (used to
// check that state/adjoint solves with the same control share one).
long factorization_count();

// The operator A(u) = K_chi + M_{kappa . u} of a given space/data/control,
// factorized once and reused for every solve against it.
class StateOperator {
 public:
  StateOperator(std::shared_ptr<const FESpace> space, const ProblemData& data,
                const VecX& u, double tol = 1e-10);
  ~StateOperator();

  const FESpace& space() const { return *space_; }
  const VecX& control() const { return u_; }
  const AssembledOperator& matrix() const { return op_; }

  // Solve A x_free = rhs_free; homogeneous increment solve.
  VecX solve(const VecX& rhs_free) const;
  SolveReport last_report() const;

  // Galerkin state solve including the essential trace lifting.
  FEField solve_state() const;
  // Galerkin adjoint solve at the given discrete state.
  FEField solve_adjoint(const FEField& y) const;

 private:
  std::shared_ptr<const FESpace> space_;
  ProblemData data_;
  VecX u_;
  double tol_;
  AssembledOperator op_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Single-entry cache keyed by (space, u); refinement produces a new space and
// naturally invalidates it.
std::shared_ptr<StateOperator> cached_operator(std::shared_ptr<const FESpace> space,
                                               const ProblemData& data, const VecX& u,
                                               double tol = 1e-10);

// Discrete state at control u. Any u > 0 is accepted; throws std::domain_error
// for a nonpositive component.
FEField solve_state(std::shared_ptr<const FESpace> space, const ProblemData& data,
                    const VecX& u, double tol = 1e-10);

FEField solve_adjoint(std::shared_ptr<const FESpace> space, const ProblemData& data,
                      const VecX& u, const FEField& y, double tol = 1e-10);

}  // namespace curlopt
