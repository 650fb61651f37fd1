#pragma once

#include <optional>
#include <set>

#include "curlopt/control.hpp"
#include "curlopt/estimator.hpp"

namespace curlopt {

struct BenchmarkCase;  // cases.hpp

// Maximum strategy: {T : zeta_T >= theta * max zeta}. Throws on empty input.
std::set<int> mark_max_strategy(const VecX& values, double theta);

struct RunRecord {
  int iteration = 0;
  long n_cells = 0;
  long n_dofs = 0;
  double h_max = 0.0;
  double cost = 0.0;
  int ssn_iterations = 0;
  VecX u;
  double est_state = 0.0;
  double est_adjoint = 0.0;
  double est_ocp = 0.0;
  // Present when the case carries an exact solution.
  std::optional<double> err_y_l2, err_y_hcurl, err_p_hcurl, err_u;
};

struct AdaptiveRun {
  std::vector<RunRecord> records;
  int ell = 1;
  bool has_exact = false;
};

struct AdaptConfig {
  long max_cells = 100000;
  int max_iters = 60;
  double theta = 0.5;
  double tol_ssn = 1e-9;
  double tol_linear = 1e-10;
  int ssn_max_iter = 30;
  VecX u0;  // empty = midpoint of [a, b]
};

// Called after each solved iteration; used by the CLI for VTK dumps.
using IterationObserver =
    std::function<void(int iter, const FESpace& space, const FEField& y,
                       const IndicatorField& indicators)>;

// Algorithm loop: SSN solve (warm-started from the previous control),
// indicate, mark (union of the two per-estimator marked sets), bisect.
AdaptiveRun run_adaptive(const BenchmarkCase& bc, const AdaptConfig& config,
                         const IterationObserver& observer = nullptr);

// Uniform driver: each level refines every cell three bisection sweeps, which
// reproduces the half-scale Kuhn mesh (h -> h/2). Emits `levels` records.
AdaptiveRun run_uniform(const BenchmarkCase& bc, int levels, const AdaptConfig& config = {},
                        const IterationObserver& observer = nullptr);

enum class EOCMode { h, N };

struct EOCTable {
  struct Row {
    double size;   // h or N
    double error;
    double order;  // NaN in the first row
  };
  std::vector<Row> rows;
};

// order_i = log(e_{i-1}/e_i) / log(h_{i-1}/h_i); for mode N the effective h
// is N^{-1/3}.
EOCTable eoc_table(const std::vector<double>& errors, const std::vector<double>& sizes,
                   EOCMode mode);

// Least-squares decay exponent r of error ~ C N^{-r} over the trailing
// `tail_fraction` of the samples.
double decay_exponent_vs_N(const std::vector<double>& errors, const std::vector<double>& N,
                           double tail_fraction = 0.5);

}  // namespace curlopt
