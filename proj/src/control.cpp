#include "curlopt/control.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

namespace curlopt {

double cost_value(const FESpace& space, const ProblemData& data, const FEField& y,
                  const VecX& u) {
  return tracking_cost(space, y, data.y_Omega, data.E_Omega, data.quad_refine) +
         0.5 * data.alpha * u.squaredNorm();
}

VecX reduced_gradient(const FESpace& space, const ProblemData& data, const VecX& u,
                      const FEField& y, const FEField& p) {
  return data.alpha * u - subdomain_product_integrals(space, y, p, data.kappa);
}

VecX project_box(const VecX& v, const VecX& a, const VecX& b) {
  return v.cwiseMax(a).cwiseMin(b);
}

namespace {

// Shared pieces of the SSN iteration at a fixed control.
struct SsnWorkspace {
  std::shared_ptr<const FESpace> space;
  const ProblemData& data;
  AssembledOperator C;        // (., .) + (curl ., curl .), unit coefficients
  VecX load;                  // (f, w)
  std::vector<VecX> Bk_cols_are_dynamic;  // unused marker
  std::vector<AssembledOperator> B;       // mass with kappa 1_{Omega_k}

  explicit SsnWorkspace(std::shared_ptr<const FESpace> sp, const ProblemData& d)
      : space(std::move(sp)), data(d) {
    const auto& mesh = space->mesh();
    C = assemble_blocks(*space, std::vector<double>(mesh.n_cells(), 1.0),
                        std::vector<double>(mesh.n_cells(), 1.0));
    load = assemble_load(*space, data.f, data.quad_refine);
    B.reserve(data.ell);
    for (int k = 0; k < data.ell; ++k)
      B.push_back(assemble_blocks(*space, {}, data.kappa_indicator_cellwise(mesh, k)));
  }

  VecX apply_full(const AssembledOperator& op, const FEField& v) const {
    return op.ff * v.free_part() + op.fc * v.constrained_part();
  }

  // Stationary values s_k = alpha^{-1} integral_{Omega_k} kappa y.p.
  VecX stationary(const FEField& y, const FEField& p) const {
    return subdomain_product_integrals(*space, y, p, data.kappa) / data.alpha;
  }

  VecX clamp_residual(const VecX& u, const VecX& s) const {
    VecX r(data.ell);
    for (int k = 0; k < data.ell; ++k)
      r[k] = u[k] - s[k] - std::max(data.lower[k] - s[k], 0.0) +
             std::max(s[k] - data.upper[k], 0.0);
    return r;
  }

  // Generalized derivative factor of the clamp residual w.r.t. s, negated:
  // 1 in the inactive regime, 0 where a bound is active (max' = 1 at c >= 0).
  VecX clamp_active_factor(const VecX& s) const {
    VecX g(data.ell);
    for (int k = 0; k < data.ell; ++k) {
      double v = 1.0;
      if (data.lower[k] - s[k] >= 0.0) v = 0.0;
      if (s[k] - data.upper[k] >= 0.0) v = 0.0;
      g[k] = v;
    }
    return g;
  }

  // Residual blocks at (y, p, u) for the operator A(u).
  struct Residual {
    VecX r1, r2, r3;
    double norm() const {
      return std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm());
    }
  };

  Residual residual(const StateOperator& A, const FEField& y, const FEField& p,
                    const VecX& u) const {
    Residual r;
    r.r1 = apply_full(A.matrix(), y) - load;
    const VecX adj_rhs =
        assemble_adjoint_rhs(*space, y, data.y_Omega, data.E_Omega, data.quad_refine);
    r.r2 = apply_full(A.matrix(), p) - adj_rhs;
    r.r3 = clamp_residual(u, stationary(y, p));
    return r;
  }
};

}  // namespace

OptimalityTriple ssn_solve(std::shared_ptr<const FESpace> space, const ProblemData& data,
                           const VecX& u0, const SsnOptions& opts) {
  data.validate();
  const VecX u_feasible = project_box(u0, data.lower, data.upper);
  const double infeas = (u0 - u_feasible).cwiseAbs().maxCoeff();
  if (infeas > 1e-10 * (1.0 + data.upper.cwiseAbs().maxCoeff()))
    throw std::domain_error("ssn_solve: initial guess must lie in [a, b]");

  SsnWorkspace ws(space, data);
  SsnReport report;

  // The state and adjoint blocks are linear in (y, p) at fixed u, so they are
  // eliminated exactly: every iterate carries y = y(u) and p = p(u), and the
  // Schur system reduces to the ell clamped stationarity equations. The
  // combined residual then consists of the two solver residuals plus r3.
  VecX u = u_feasible;
  auto A = cached_operator(space, data, u, opts.lin_tol);
  FEField y = A->solve_state();
  FEField p = A->solve_adjoint(y);

  auto res = ws.residual(*A, y, p, u);
  double res_norm = res.norm();
  report.residual_history.push_back(res_norm);

  const int ell = data.ell;
  for (int it = 0; it < opts.max_iter; ++it) {
    if (res_norm <= opts.tol) {
      report.converged = true;
      break;
    }
    report.iterations = it + 1;

    std::vector<VecX> By(ell), Bp(ell);
    for (int k = 0; k < ell; ++k) {
      By[k] = ws.apply_full(ws.B[k], y);
      Bp[k] = ws.apply_full(ws.B[k], p);
    }
    const VecX s = ws.stationary(y, p);
    const VecX gamma = ws.clamp_active_factor(s);

    // Schur elimination onto the control increment; 2 ell solves sharing the
    // factorization of A(u). The (y, p) residual blocks vanish by construction.
    std::vector<VecX> q(ell), w(ell);
    for (int k = 0; k < ell; ++k) {
      q[k] = A->solve(By[k]);
      w[k] = A->solve(ws.C.ff * q[k] + Bp[k]);
    }
    MatX M = MatX::Identity(ell, ell);
    for (int k = 0; k < ell; ++k)
      for (int j = 0; j < ell; ++j)
        M(k, j) += gamma[k] / data.alpha * (Bp[k].dot(q[j]) + By[k].dot(w[j]));
    const VecX du = M.partialPivLu().solve(-res.r3);

    // Damped update: halve the step until the residual decreases. Each trial
    // re-solves the eliminated blocks at the trial control. The first trial is
    // capped so no control component moves by more than a fixed factor; the
    // bilinear operator then changes by a bounded amount per step.
    double step = 1.0;
    const double sigma = opts.max_step_factor;
    if (sigma > 1.0) {
      for (int k = 0; k < ell; ++k) {
        const double target = u[k] + du[k];
        double cap = 1.0;
        if (target > sigma * u[k]) cap = (sigma - 1.0) * u[k] / du[k];
        if (target < u[k] / sigma) cap = (1.0 - 1.0 / sigma) * u[k] / (-du[k]);
        step = std::min(step, std::max(cap, 1e-6));
      }
    }
    FEField y_new, p_new;
    VecX u_new;
    SsnWorkspace::Residual res_new;
    double res_new_norm = 0.0;
    std::shared_ptr<StateOperator> A_new;
    bool have_candidate = false;
    while (true) {
      u_new = u + step * du;
      if (u_new.minCoeff() > 0.0) {
        A_new = cached_operator(space, data, u_new, opts.lin_tol);
        y_new = A_new->solve_state();
        p_new = A_new->solve_adjoint(y_new);
        res_new = ws.residual(*A_new, y_new, p_new, u_new);
        res_new_norm = res_new.norm();
        have_candidate = true;
        if (res_new_norm < res_norm) break;
      }
      step *= 0.5;
      if (step < std::pow(2.0, -10)) {
        if (have_candidate) break;  // accept the last evaluated step
        report.residual_history.push_back(res_norm);
        throw ssn_error("ssn_solve: damping failed to produce a feasible step", report);
      }
    }
    y = y_new;
    p = p_new;
    u = u_new;
    A = A_new;
    res = res_new;
    res_norm = res_new_norm;
    report.residual_history.push_back(res_norm);
  }
  if (!report.converged && res_norm <= opts.tol) report.converged = true;
  if (!report.converged)
    throw ssn_error("ssn_solve: iteration cap exceeded", report);

  OptimalityTriple triple{std::move(y), std::move(p), u, VecX(), report};
  triple.gradient = reduced_gradient(*space, data, triple.u, triple.y, triple.p);
  return triple;
}

MatX reduced_hessian(std::shared_ptr<const FESpace> space, const ProblemData& data,
                     const VecX& u, const FEField& y, const FEField& p, double lin_tol) {
  const auto& mesh = space->mesh();
  auto A = cached_operator(space, data, u, lin_tol);
  AssembledOperator C =
      assemble_blocks(*space, std::vector<double>(mesh.n_cells(), 1.0),
                      std::vector<double>(mesh.n_cells(), 1.0));
  const int ell = data.ell;
  std::vector<AssembledOperator> B(ell);
  std::vector<VecX> z(ell), Bp(ell);
  for (int k = 0; k < ell; ++k) {
    B[k] = assemble_blocks(*space, {}, data.kappa_indicator_cellwise(mesh, k));
    const VecX By = B[k].ff * y.free_part() + B[k].fc * y.constrained_part();
    z[k] = A->solve(-By);  // linearized state, homogeneous trace
    Bp[k] = B[k].ff * p.free_part() + B[k].fc * p.constrained_part();
  }
  MatX H(ell, ell);
  for (int k = 0; k < ell; ++k)
    for (int l = k; l < ell; ++l) {
      const double v = data.alpha * (k == l ? 1.0 : 0.0) - Bp[k].dot(z[l]) -
                       Bp[l].dot(z[k]) + z[k].dot(C.ff * z[l]);
      H(k, l) = v;
      H(l, k) = v;
    }
  return H;
}

SecondOrderCheck check_second_order(std::shared_ptr<const FESpace> space,
                                    const ProblemData& data, const OptimalityTriple& triple,
                                    double tau, double nu_floor) {
  SecondOrderCheck chk;
  chk.tau = tau;
  const int ell = data.ell;
  const double active_tol = 1e-9;
  std::vector<int> sign_all(ell, 0);
  for (int k = 0; k < ell; ++k) {
    if (std::abs(triple.gradient[k]) > tau) continue;
    chk.free_set.push_back(k);
    if (std::abs(triple.u[k] - data.lower[k]) <= active_tol * (1.0 + std::abs(data.lower[k])))
      sign_all[k] = +1;
    else if (std::abs(triple.u[k] - data.upper[k]) <=
             active_tol * (1.0 + std::abs(data.upper[k])))
      sign_all[k] = -1;
  }
  if (chk.free_set.empty()) {
    chk.cone_empty = true;
    chk.passed = true;  // vacuous: every direction is zeroed
    return chk;
  }

  const MatX H = reduced_hessian(space, data, triple.u, triple.y, triple.p);
  const int m = static_cast<int>(chk.free_set.size());
  chk.restricted_hessian.resize(m, m);
  bool any_sign = false;
  chk.sign_fixed.resize(m);
  for (int i = 0; i < m; ++i) {
    chk.sign_fixed[i] = sign_all[chk.free_set[i]];
    any_sign = any_sign || chk.sign_fixed[i] != 0;
    for (int j = 0; j < m; ++j)
      chk.restricted_hessian(i, j) = H(chk.free_set[i], chk.free_set[j]);
  }

  if (!any_sign) {
    Eigen::SelfAdjointEigenSolver<MatX> es(chk.restricted_hessian);
    chk.nu_min = es.eigenvalues().minCoeff();
  } else {
    // Sign-restricted cone: sample random directions, projected onto the cone.
    std::mt19937 rng(20240611u);
    std::normal_distribution<double> normal;
    double best = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 10000; ++trial) {
      VecX h(m);
      for (int i = 0; i < m; ++i) {
        double v = normal(rng);
        if (chk.sign_fixed[i] > 0) v = std::abs(v);
        if (chk.sign_fixed[i] < 0) v = -std::abs(v);
        h[i] = v;
      }
      const double n2 = h.squaredNorm();
      if (n2 == 0.0) continue;
      best = std::min(best, h.dot(chk.restricted_hessian * h) / n2);
    }
    chk.nu_min = best;
  }
  chk.passed = chk.nu_min >= nu_floor;
  return chk;
}

}  // namespace curlopt
