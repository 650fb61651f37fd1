#pragma once

#include "curlopt/problem.hpp"

namespace curlopt {

// Residual a posteriori indicators. The interior-face jump integral of each
// face is computed once; each adjacent cell receives h_T/2 of it with its own
// h_T. Boundary faces carry no jump terms.
struct IndicatorField {
  VecX est_state;    // per-cell E_{st,T} = sqrt(E_{T,1}^2 + E_{T,2}^2)
  VecX est_adjoint;  // per-cell E_{adj,T}
  double total_state = 0.0;
  double total_adjoint = 0.0;
  double total_ocp = 0.0;
};

// Per-cell (E_{T,1}, E_{T,2}) of the state discretization.
std::pair<VecX, VecX> state_indicators(const FESpace& space, const ProblemData& data,
                                       const VecX& u, const FEField& y);

// Per-cell adjoint counterparts; curls of data are taken from the analytic
// callables carried by the data.
std::pair<VecX, VecX> adjoint_indicators(const FESpace& space, const ProblemData& data,
                                         const VecX& u, const FEField& y, const FEField& p);

IndicatorField make_indicator_field(const std::pair<VecX, VecX>& state,
                                    const std::pair<VecX, VecX>& adjoint);

struct EstimatorTotals {
  double est_state = 0.0;
  double est_adjoint = 0.0;
  double est_ocp = 0.0;
};

EstimatorTotals total_estimator(const IndicatorField& ind);

// Data oscillation over the face-neighbor patch: sum over patch cells of
// h (||v - pi v|| + ||div v - pi div v||) plus interior-face normal-jump
// terms of v - pi v.
VecX oscillation(const FESpace& space, const FieldFn& v, const ScalarFieldFn& div_v,
                 const QuadRefineFn& refine = nullptr);

// Oscillation terms of the curl data: patch sums of h ||curl E - pi curl E||
// plus tangential jumps of E - pi E.
VecX oscillation_curl_data(const FESpace& space, const FieldFn& E, const FieldFn& curl_E,
                           const QuadRefineFn& refine = nullptr);

struct OscillationField {
  VecX osc_f;
  VecX osc_y_Omega;
  VecX osc_E_Omega;
};

OscillationField oscillation_field(const FESpace& space, const ProblemData& data);

}  // namespace curlopt
