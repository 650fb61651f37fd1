#include "curlopt/pde.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace curlopt {

namespace {
std::atomic<long> g_factorizations{0};

double relative_residual(const SpMat& A, const VecX& x, const VecX& b) {
  const double nb = b.norm();
  if (nb == 0.0) return x.norm() == 0.0 ? 0.0 : (A * x).norm();
  return (A * x - b).norm() / nb;
}

double one_norm(const SpMat& A) {
  VecX colsum = VecX::Zero(A.cols());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) colsum[it.col()] += std::abs(it.value());
  return colsum.size() ? colsum.maxCoeff() : 0.0;
}

// tol ||b|| plus the backward-stability floor of finite precision.
bool residual_ok(const SpMat& A, double a_norm, const VecX& x, const VecX& b, double tol) {
  const double res = (A * x - b).norm();
  return res <= tol * b.norm() + 100.0 * std::numeric_limits<double>::epsilon() * a_norm *
                                      (1.0 + x.norm());
}
}  // namespace

long factorization_count() { return g_factorizations.load(); }

std::pair<VecX, SolveReport> linear_solve(const SpMat& A, const VecX& b, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  VecX x;
  if (b.norm() == 0.0) {
    x = VecX::Zero(A.rows());
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {x, rep};
  }
  if (A.rows() <= kDirectSolveLimit) {
    Eigen::SimplicialLDLT<SpMat> ldlt(A);
    ++g_factorizations;
    if (ldlt.info() != Eigen::Success)
      throw solver_error("linear_solve: factorization failed", rep);
    x = ldlt.solve(b);
    const double a_norm = one_norm(A);
    for (int r = 0; r < 3; ++r) {
      if (residual_ok(A, a_norm, x, b, tol)) break;
      x += ldlt.solve(b - A * x);
      ++rep.iterations;
    }
    rep.relative_residual = relative_residual(A, x, b);
    rep.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!residual_ok(A, a_norm, x, b, tol) || !x.allFinite())
      throw solver_error("linear_solve: residual above tolerance", rep);
    return {x, rep};
  } else {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::IncompleteCholesky<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(20000);
    cg.compute(A);
    x = cg.solve(b);
    rep.iterations = static_cast<int>(cg.iterations());
  }
  rep.relative_residual = relative_residual(A, x, b);
  rep.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!(rep.relative_residual <= tol) || !x.allFinite())
    throw solver_error("linear_solve: residual above tolerance", rep);
  return {x, rep};
}

struct StateOperator::Impl {
  double a_norm = 0.0;
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                           Eigen::IncompleteCholesky<double>>
      cg;
  bool direct = true;
  mutable SolveReport last;
};

StateOperator::StateOperator(std::shared_ptr<const FESpace> space, const ProblemData& data,
                             const VecX& u, double tol)
    : space_(std::move(space)), data_(data), u_(u), tol_(tol), impl_(new Impl) {
  if (u_.size() != data_.ell)
    throw std::domain_error("StateOperator: control size mismatch");
  for (int k = 0; k < data_.ell; ++k)
    if (u_[k] <= 0.0)
      throw std::domain_error("StateOperator: control components must be positive");
  op_ = assemble_operator(*space_, data_.chi_cellwise(space_->mesh()),
                          data_.kappa_u_cellwise(space_->mesh(), u_));
  impl_->a_norm = one_norm(op_.ff);
  impl_->direct = op_.ff.rows() <= kDirectSolveLimit;
  if (impl_->direct) {
    impl_->ldlt.compute(op_.ff);
    ++g_factorizations;
    if (impl_->ldlt.info() != Eigen::Success)
      throw solver_error("StateOperator: factorization failed", SolveReport{});
  } else {
    impl_->cg.setTolerance(tol_);
    impl_->cg.setMaxIterations(20000);
    impl_->cg.compute(op_.ff);
  }
}

StateOperator::~StateOperator() = default;

VecX StateOperator::solve(const VecX& rhs_free) const {
  const auto t0 = std::chrono::steady_clock::now();
  VecX x;
  if (impl_->direct) {
    x = impl_->ldlt.solve(rhs_free);
    impl_->last.iterations = 0;
    // iterative refinement against the tolerance contract
    for (int r = 0; r < 3; ++r) {
      if (residual_ok(op_.ff, impl_->a_norm, x, rhs_free, tol_)) break;
      x += impl_->ldlt.solve(rhs_free - op_.ff * x);
      ++impl_->last.iterations;
    }
  } else {
    x = impl_->cg.solve(rhs_free);
    impl_->last.iterations = static_cast<int>(impl_->cg.iterations());
  }
  impl_->last.relative_residual = relative_residual(op_.ff, x, rhs_free);
  impl_->last.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!residual_ok(op_.ff, impl_->a_norm, x, rhs_free, tol_) || !x.allFinite())
    throw solver_error("StateOperator: residual above tolerance", impl_->last);
  return x;
}

SolveReport StateOperator::last_report() const { return impl_->last; }

FEField StateOperator::solve_state() const {
  FEField y(*space_);
  const bool lifted = data_.dirichlet_state || data_.dirichlet_potential_state;
  if (data_.dirichlet_potential_state)
    y.edge_values() =
        boundary_edge_values_from_potential(*space_, data_.dirichlet_potential_state);
  else if (data_.dirichlet_state)
    y.edge_values() = boundary_edge_values(*space_, data_.dirichlet_state);
  VecX rhs = assemble_load(*space_, data_.f, data_.quad_refine);
  if (lifted) rhs -= op_.fc * y.constrained_part();
  y.set_free(solve(rhs));
  return y;
}

FEField StateOperator::solve_adjoint(const FEField& y) const {
  FEField p(*space_);
  const bool lifted = data_.dirichlet_adjoint || data_.dirichlet_potential_adjoint;
  if (data_.dirichlet_potential_adjoint)
    p.edge_values() =
        boundary_edge_values_from_potential(*space_, data_.dirichlet_potential_adjoint);
  else if (data_.dirichlet_adjoint)
    p.edge_values() = boundary_edge_values(*space_, data_.dirichlet_adjoint);
  // RHS sign: the assembled functional is (y - y_Omega, w) + (curl y - E_Omega, curl w).
  VecX rhs = assemble_adjoint_rhs(*space_, y, data_.y_Omega, data_.E_Omega, data_.quad_refine);
  if (lifted) rhs -= op_.fc * p.constrained_part();
  p.set_free(solve(rhs));
  return p;
}

namespace {
struct CacheEntry {
  const FESpace* space = nullptr;
  long data_id = -1;
  VecX u;
  double tol = 0.0;
  std::shared_ptr<StateOperator> op;
};
std::mutex g_cache_mutex;
CacheEntry g_cache;
}  // namespace

std::shared_ptr<StateOperator> cached_operator(std::shared_ptr<const FESpace> space,
                                               const ProblemData& data, const VecX& u,
                                               double tol) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  if (g_cache.space == space.get() && g_cache.data_id == data.stamp.id &&
      g_cache.tol == tol && g_cache.u.size() == u.size() && g_cache.u == u)
    return g_cache.op;
  auto op = std::make_shared<StateOperator>(space, data, u, tol);
  g_cache = {space.get(), data.stamp.id, u, tol, op};
  return op;
}

FEField solve_state(std::shared_ptr<const FESpace> space, const ProblemData& data,
                    const VecX& u, double tol) {
  return cached_operator(std::move(space), data, u, tol)->solve_state();
}

FEField solve_adjoint(std::shared_ptr<const FESpace> space, const ProblemData& data,
                      const VecX& u, const FEField& y, double tol) {
  return cached_operator(std::move(space), data, u, tol)->solve_adjoint(y);
}

}  // namespace curlopt
