#pragma once

#include "curlopt/pde.hpp"

namespace curlopt {

// J(y_h, u) = 1/2 ||y_h - y_Omega||^2 + 1/2 ||curl y_h - E_Omega||^2 + alpha/2 |u|^2
double cost_value(const FESpace& space, const ProblemData& data, const FEField& y,
                  const VecX& u);

// g_k = alpha u_k - integral over Omega_k of kappa (y . p)
VecX reduced_gradient(const FESpace& space, const ProblemData& data, const VecX& u,
                      const FEField& y, const FEField& p);

VecX project_box(const VecX& v, const VecX& a, const VecX& b);

struct SsnOptions {
  double tol = 1e-9;
  int max_iter = 30;
  double lin_tol = 1e-10;
  // cap on the per-iteration multiplicative change of any control component
  double max_step_factor = 20.0;
};

struct SsnReport {
  int iterations = 0;
  std::vector<double> residual_history;  // ||F|| before each step and at exit
  bool converged = false;
};

struct ssn_error : std::runtime_error {
  SsnReport report;
  ssn_error(const std::string& what, SsnReport r)
      : std::runtime_error(what), report(std::move(r)) {}
};

struct OptimalityTriple {
  FEField y;
  FEField p;
  VecX u;
  VecX gradient;
  SsnReport report;
};

// Semi-smooth Newton on the discrete optimality system written with the
// clamped stationarity equations u_k - s_k - max(a_k - s_k, 0) + max(s_k - b_k, 0),
// s_k = alpha^{-1} integral_{Omega_k} kappa y.p. Each iteration eliminates the
// coupled linearized system to a dense ell x ell Schur complement through
// 2 ell + 2 solves with one factorization. Damped (step halving down to 2^-10)
// when a full step does not reduce ||F||.
OptimalityTriple ssn_solve(std::shared_ptr<const FESpace> space, const ProblemData& data,
                           const VecX& u0, const SsnOptions& opts = {});

// H_{kl} = alpha delta_kl - (kappa e_k z_l, p) - (kappa e_l z_k, p)
//          + (z_k, z_l) + (curl z_k, curl z_l),  A(u) z_k = -M_{kappa e_k} y.
MatX reduced_hessian(std::shared_ptr<const FESpace> space, const ProblemData& data,
                     const VecX& u, const FEField& y, const FEField& p,
                     double lin_tol = 1e-10);

struct SecondOrderCheck {
  double tau = 0.0;
  std::vector<int> free_set;      // indices with |g_k| <= tau
  std::vector<int> sign_fixed;    // +1: v_k >= 0 (at lower bound), -1: v_k <= 0, 0: free
  MatX restricted_hessian;        // H on the free set
  double nu_min = 0.0;            // min of h^T H h / |h|^2 over the cone (0 if empty)
  bool cone_empty = false;
  bool passed = false;
};

// Second-order sufficient condition over the tau-critical cone. Uses an
// eigen-decomposition when no free index sits at an active bound, projected
// random sampling (10^4 directions) otherwise.
SecondOrderCheck check_second_order(std::shared_ptr<const FESpace> space,
                                    const ProblemData& data, const OptimalityTriple& triple,
                                    double tau, double nu_floor);

}  // namespace curlopt
