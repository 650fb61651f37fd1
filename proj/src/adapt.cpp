#include "curlopt/adapt.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "curlopt/cases.hpp"

namespace curlopt {

std::set<int> mark_max_strategy(const VecX& values, double theta) {
  if (values.size() == 0)
    throw std::invalid_argument("mark_max_strategy: empty value array");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::invalid_argument("mark_max_strategy: theta must lie in (0, 1]");
  const double threshold = theta * values.maxCoeff();
  std::set<int> marked;
  for (int i = 0; i < values.size(); ++i)
    if (values[i] >= threshold) marked.insert(i);
  return marked;
}

namespace {

RunRecord make_record(int iter, const BenchmarkCase& bc, const FESpace& space,
                      const OptimalityTriple& triple, const IndicatorField& ind) {
  RunRecord rec;
  rec.iteration = iter;
  rec.n_cells = space.mesh().n_cells();
  rec.n_dofs = space.dim();
  rec.h_max = mesh_quality_stats(space.mesh()).h_max;
  rec.cost = cost_value(space, bc.data, triple.y, triple.u);
  rec.ssn_iterations = triple.report.iterations;
  rec.u = triple.u;
  rec.est_state = ind.total_state;
  rec.est_adjoint = ind.total_adjoint;
  rec.est_ocp = ind.total_ocp;
  if (bc.exact) {
    const auto ye = error_norms(triple.y, bc.exact->y, bc.exact->curl_y, bc.data.quad_refine);
    const auto pe = error_norms(triple.p, bc.exact->p, bc.exact->curl_p, bc.data.quad_refine);
    rec.err_y_l2 = ye.l2;
    rec.err_y_hcurl = ye.hcurl;
    rec.err_p_hcurl = pe.hcurl;
    rec.err_u = (triple.u - bc.exact->u).norm();
  }
  return rec;
}

OptimalityTriple solve_iteration(const BenchmarkCase& bc, std::shared_ptr<const FESpace> space,
                                 const AdaptConfig& config, const VecX& u_start) {
  SsnOptions opts;
  opts.tol = config.tol_ssn;
  opts.lin_tol = config.tol_linear;
  opts.max_iter = config.ssn_max_iter;
  return ssn_solve(space, bc.data, u_start, opts);
}

}  // namespace

AdaptiveRun run_adaptive(const BenchmarkCase& bc, const AdaptConfig& config,
                         const IterationObserver& observer) {
  AdaptiveRun run;
  run.ell = bc.data.ell;
  run.has_exact = bc.exact.has_value();

  TetMesh mesh = bc.build_mesh(bc.default_n0);
  VecX u = config.u0.size() ? config.u0 : bc.data.midpoint_control();
  for (int iter = 0; iter < config.max_iters; ++iter) {
    auto space = build_space(std::move(mesh));
    OptimalityTriple triple;
    try {
      triple = solve_iteration(bc, space, config, u);
    } catch (const ssn_error&) {
      if (run.records.empty()) throw;
      return run;  // partial record on non-convergence
    }
    u = triple.u;  // warm start for the next mesh

    const auto st = state_indicators(*space, bc.data, triple.u, triple.y);
    const auto adj = adjoint_indicators(*space, bc.data, triple.u, triple.y, triple.p);
    const auto ind = make_indicator_field(st, adj);
    run.records.push_back(make_record(iter, bc, *space, triple, ind));
    if (observer) observer(iter, *space, triple.y, ind);

    if (space->mesh().n_cells() >= config.max_cells || iter + 1 >= config.max_iters) break;

    auto marked = mark_max_strategy(ind.est_state, config.theta);
    auto marked_adj = mark_max_strategy(ind.est_adjoint, config.theta);
    marked.insert(marked_adj.begin(), marked_adj.end());
    mesh = bisect_marked(space->mesh(), marked);
  }
  return run;
}

AdaptiveRun run_uniform(const BenchmarkCase& bc, int levels, const AdaptConfig& config,
                        const IterationObserver& observer) {
  if (levels < 1) throw std::invalid_argument("run_uniform: levels must be >= 1");
  AdaptiveRun run;
  run.ell = bc.data.ell;
  run.has_exact = bc.exact.has_value();

  TetMesh mesh = bc.build_mesh(bc.default_n0);
  VecX u = config.u0.size() ? config.u0 : bc.data.midpoint_control();
  for (int level = 0; level < levels; ++level) {
    auto space = build_space(std::move(mesh));
    OptimalityTriple triple = solve_iteration(bc, space, config, u);
    u = triple.u;

    const auto st = state_indicators(*space, bc.data, triple.u, triple.y);
    const auto adj = adjoint_indicators(*space, bc.data, triple.u, triple.y, triple.p);
    const auto ind = make_indicator_field(st, adj);
    run.records.push_back(make_record(level, bc, *space, triple, ind));
    if (observer) observer(level, *space, triple.y, ind);

    if (level + 1 >= levels) break;
    mesh = bisect_all(space->mesh(), 3);
  }
  return run;
}

EOCTable eoc_table(const std::vector<double>& errors, const std::vector<double>& sizes,
                   EOCMode mode) {
  if (errors.size() != sizes.size() || errors.size() < 2)
    throw std::invalid_argument("eoc_table: need equal-length inputs with >= 2 entries");
  for (std::size_t i = 0; i < errors.size(); ++i)
    if (!(errors[i] > 0.0) || !(sizes[i] > 0.0))
      throw std::invalid_argument("eoc_table: entries must be positive");
  auto eff_h = [&](double s) {
    return mode == EOCMode::h ? s : std::pow(s, -1.0 / 3.0);
  };
  EOCTable table;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    EOCTable::Row row;
    row.size = sizes[i];
    row.error = errors[i];
    row.order = std::numeric_limits<double>::quiet_NaN();
    if (i > 0)
      row.order = std::log(errors[i - 1] / errors[i]) /
                  std::log(eff_h(sizes[i - 1]) / eff_h(sizes[i]));
    table.rows.push_back(row);
  }
  return table;
}

double decay_exponent_vs_N(const std::vector<double>& errors, const std::vector<double>& N,
                           double tail_fraction) {
  if (errors.size() != N.size() || errors.size() < 2)
    throw std::invalid_argument("decay_exponent_vs_N: need >= 2 samples");
  const std::size_t start =
      std::min(errors.size() - 2,
               static_cast<std::size_t>((1.0 - tail_fraction) * errors.size()));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = start; i < errors.size(); ++i) {
    const double x = std::log(N[i]), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;
}

}  // namespace curlopt
