#include "curlopt/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace curlopt {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string history_csv(const AdaptiveRun& run) {
  std::ostringstream os;
  os << "iter,ncells,ndofs,h_max,J,ssn_iters";
  for (int k = 1; k <= run.ell; ++k) os << ",u_" << k;
  os << ",est_st,est_adj,est_ocp,err_y_l2,err_y_hcurl,err_p_hcurl,err_u\n";
  for (const auto& r : run.records) {
    os << r.iteration << ',' << r.n_cells << ',' << r.n_dofs << ',' << fmt(r.h_max) << ','
       << fmt(r.cost) << ',' << r.ssn_iterations;
    for (int k = 0; k < run.ell; ++k) os << ',' << fmt(r.u[k]);
    os << ',' << fmt(r.est_state) << ',' << fmt(r.est_adjoint) << ',' << fmt(r.est_ocp) << ','
       << fmt_opt(r.err_y_l2) << ',' << fmt_opt(r.err_y_hcurl) << ','
       << fmt_opt(r.err_p_hcurl) << ',' << fmt_opt(r.err_u) << '\n';
  }
  return os.str();
}

std::string write_outputs(const AdaptiveRun& run, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = (std::filesystem::path(dir) / "history.csv").string();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("write_outputs: cannot open " + path);
  out << history_csv(run);
  if (!out) throw std::runtime_error("write_outputs: write failed for " + path);
  return path;
}

}  // namespace curlopt
