#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "curlopt/cases.hpp"
#include "curlopt/config.hpp"
#include "curlopt/mesh_io.hpp"
#include "curlopt/output.hpp"

namespace {

using namespace curlopt;

constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitIO = 3;

void apply_thread_env() {
  if (const char* env = std::getenv("CURLOPT_NUM_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) Eigen::setNbThreads(n);
  }
}

// Table gate for the smooth benchmark: uniform EOCs and error magnitudes.
int check_test1(const AdaptiveRun& run) {
  const double ref_err[4] = {0.98925, 0.38458, 0.16768, 0.08271};
  const double ref_ord_y[3] = {0.825, 0.961, 0.986};
  const double ref_ord_p[3] = {1.363, 1.197, 1.019};
  std::vector<double> h, ey, ep;
  for (const auto& r : run.records) {
    h.push_back(r.h_max);
    ey.push_back(*r.err_y_hcurl);
    ep.push_back(*r.err_p_hcurl);
  }
  bool ok = true;
  auto report = [&](const std::string& what, double got, double want, double tol) {
    const bool pass = std::abs(got - want) <= tol;
    ok = ok && pass;
    std::printf("[%s] %-28s got %10.5f want %10.5f +- %.3f\n", pass ? "PASS" : "FAIL",
                what.c_str(), got, want, tol);
  };
  const auto tab_y = eoc_table(ey, h, EOCMode::h);
  const auto tab_p = eoc_table(ep, h, EOCMode::h);
  const std::size_t n_ord = std::min<std::size_t>(3, run.records.size() - 1);
  for (std::size_t i = 0; i < n_ord; ++i) {
    report("state EOC level " + std::to_string(i + 1), tab_y.rows[i + 1].order,
           ref_ord_y[i], 0.15);
    report("adjoint EOC level " + std::to_string(i + 1), tab_p.rows[i + 1].order,
           ref_ord_p[i], 0.25);
  }
  for (std::size_t i = 0; i < std::min<std::size_t>(4, ey.size()); ++i)
    report("state error level " + std::to_string(i), ey[i], ref_err[i],
           0.35 * ref_err[i]);
  return ok ? 0 : kExitSolver;
}

int cmd_run(const std::string& config_path, bool check, const std::string& out_override) {
  RunConfig cfg;
  try {
    cfg = parse_config_file(config_path);
  } catch (const config_error& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }
  if (!out_override.empty()) cfg.out_dir = out_override;

  BenchmarkCase bc;
  try {
    bc = case_by_name(cfg.case_name);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  }
  if (cfg.n0 > 0) bc.default_n0 = cfg.n0;

  IterationObserver observer;
  if (cfg.vtk_every > 0) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.out_dir, ec);
    observer = [&cfg](int iter, const FESpace& space, const FEField& y,
                      const IndicatorField& ind) {
      if (iter % cfg.vtk_every != 0) return;
      char name[64];
      std::snprintf(name, sizeof name, "mesh_%04d.vtk", iter);
      write_vtk_file((std::filesystem::path(cfg.out_dir) / name).string(), space.mesh(),
                     {{"est_state", ind.est_state}, {"est_adjoint", ind.est_adjoint}}, &y);
    };
  }

  AdaptiveRun run;
  try {
    if (cfg.refine == "uniform")
      run = run_uniform(bc, cfg.levels, cfg.adapt_config(), observer);
    else
      run = run_adaptive(bc, cfg.adapt_config(), observer);
  } catch (const std::exception& e) {
    std::cerr << "solver: " << e.what() << "\n";
    return kExitSolver;
  }

  try {
    const std::string path = write_outputs(run, cfg.out_dir);
    std::cout << "wrote " << path << " (" << run.records.size() << " rows)\n";
  } catch (const std::exception& e) {
    std::cerr << "io: " << e.what() << "\n";
    return kExitIO;
  }

  if (check) {
    if (cfg.case_name == "test1" && cfg.refine == "uniform" && run.records.size() >= 2)
      return check_test1(run);
    std::cerr << "config: --check is defined for case=test1 with refine=uniform\n";
    return kExitConfig;
  }
  return 0;
}

int cmd_mesh_info(const std::string& path) {
  TetMesh mesh;
  try {
    mesh = read_msh_file(path);
  } catch (const std::exception& e) {
    std::cerr << "mesh-info: " << e.what() << "\n";
    return kExitIO;
  }
  const auto stats = mesh_quality_stats(mesh);
  const auto [edges, faces] = extract_topology(mesh);
  std::printf("vertices        %d\n", mesh.n_vertices());
  std::printf("cells           %d\n", mesh.n_cells());
  std::printf("subdomains      %d\n", mesh.n_subdomains());
  std::printf("edges           %d (boundary %d)\n", edges.n_edges(), edges.n_boundary_edges);
  std::printf("interior faces  %zu\n", faces.interior_faces.size());
  std::printf("boundary faces  %zu\n", mesh.boundary_faces.size());
  std::printf("h_max           %.6g\n", stats.h_max);
  std::printf("h_min           %.6g\n", stats.h_min);
  std::printf("min dihedral    %.4f deg\n", stats.min_dihedral * 180.0 / std::numbers::pi);
  std::printf("nedelec dofs    %ld\n", stats.dof_estimate);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"curl-curl bilinear optimal control: benchmarks, estimators, AMR"};
  app.require_subcommand(1);

  std::string config_path, out_dir, msh_path;
  bool check = false;
  auto* run = app.add_subcommand("run", "run a benchmark from a config file");
  run->add_option("config", config_path, "key=value config file")->required();
  run->add_flag("--check", check, "verify the smooth-case convergence table");
  run->add_option("--out", out_dir, "output directory (overrides config)");

  auto* info = app.add_subcommand("mesh-info", "inspect an MSH v2 ASCII mesh");
  info->add_option("msh-file", msh_path, "mesh file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kExitConfig : 0;
  }

  if (run->parsed()) return cmd_run(config_path, check, out_dir);
  if (info->parsed()) return cmd_mesh_info(msh_path);
  return kExitConfig;
}
