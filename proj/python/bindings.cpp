#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curlopt/cases.hpp"
#include "curlopt/config.hpp"
#include "curlopt/mesh_io.hpp"
#include "curlopt/output.hpp"

namespace py = pybind11;
using namespace curlopt;

namespace {

py::dict record_to_dict(const RunRecord& r, int ell) {
  py::dict d;
  d["iter"] = r.iteration;
  d["ncells"] = r.n_cells;
  d["ndofs"] = r.n_dofs;
  d["h_max"] = r.h_max;
  d["J"] = r.cost;
  d["ssn_iters"] = r.ssn_iterations;
  std::vector<double> u(r.u.data(), r.u.data() + ell);
  d["u"] = u;
  d["est_st"] = r.est_state;
  d["est_adj"] = r.est_adjoint;
  d["est_ocp"] = r.est_ocp;
  if (r.err_y_hcurl) {
    d["err_y_l2"] = *r.err_y_l2;
    d["err_y_hcurl"] = *r.err_y_hcurl;
    d["err_p_hcurl"] = *r.err_p_hcurl;
    d["err_u"] = *r.err_u;
  }
  return d;
}

py::list run_to_list(const AdaptiveRun& run) {
  py::list out;
  for (const auto& r : run.records) out.append(record_to_dict(r, run.ell));
  return out;
}

}  // namespace

PYBIND11_MODULE(_curlopt, m) {
  m.doc() = "curl-curl bilinear optimal control core";

  py::class_<TetMesh>(m, "TetMesh")
      .def_property_readonly("n_vertices", &TetMesh::n_vertices)
      .def_property_readonly("n_cells", &TetMesh::n_cells)
      .def_property_readonly("n_subdomains", &TetMesh::n_subdomains)
      .def("validate", &TetMesh::validate)
      .def("cell_volume", &TetMesh::cell_volume)
      .def("cell_diameter", &TetMesh::cell_diameter);

  m.def("build_structured_domain", [](const std::string& kind, int n) {
    return build_structured_domain(domain_kind_from_string(kind), n);
  });
  m.def("bisect_marked", [](const TetMesh& mesh, const std::vector<int>& marked) {
    return bisect_marked(mesh, std::set<int>(marked.begin(), marked.end()));
  });
  m.def("bisect_all", &bisect_all, py::arg("mesh"), py::arg("sweeps") = 1);
  m.def("mesh_quality_stats", [](const TetMesh& mesh) {
    const auto s = mesh_quality_stats(mesh);
    py::dict d;
    d["h_max"] = s.h_max;
    d["h_min"] = s.h_min;
    d["min_dihedral"] = s.min_dihedral;
    d["cell_count"] = s.cell_count;
    d["dof_estimate"] = s.dof_estimate;
    return d;
  });
  m.def("topology_counts", [](const TetMesh& mesh) {
    const auto [edges, faces] = extract_topology(mesh);
    py::dict d;
    d["edges"] = edges.n_edges();
    d["boundary_edges"] = edges.n_boundary_edges;
    d["interior_faces"] = faces.interior_faces.size();
    return d;
  });
  m.def("space_dim",
        [](const TetMesh& mesh) { return FESpace(mesh).dim(); });

  m.def("cases", [] { return std::vector<std::string>{"test1", "test2", "test3"}; });

  m.def(
      "ssn_solve",
      [](const std::string& case_name, int n, double tol) {
        auto bc = case_by_name(case_name);
        auto space = build_space(bc.build_mesh(n > 0 ? n : bc.default_n0));
        SsnOptions opts;
        opts.tol = tol;
        const auto triple = ssn_solve(space, bc.data, bc.data.midpoint_control(), opts);
        py::dict d;
        std::vector<double> u(triple.u.data(), triple.u.data() + triple.u.size());
        d["u"] = u;
        d["iterations"] = triple.report.iterations;
        d["residuals"] = triple.report.residual_history;
        d["J"] = cost_value(*space, bc.data, triple.y, triple.u);
        std::vector<double> g(triple.gradient.data(),
                              triple.gradient.data() + triple.gradient.size());
        d["gradient"] = g;
        return d;
      },
      py::arg("case_name"), py::arg("n") = 0, py::arg("tol") = 1e-9);

  m.def(
      "run_uniform",
      [](const std::string& case_name, int levels, int n0) {
        auto bc = case_by_name(case_name);
        if (n0 > 0) bc.default_n0 = n0;
        return run_to_list(run_uniform(bc, levels));
      },
      py::arg("case_name"), py::arg("levels") = 2, py::arg("n0") = 0);

  m.def(
      "run_adaptive",
      [](const std::string& case_name, long max_cells, int max_iters, int n0) {
        auto bc = case_by_name(case_name);
        if (n0 > 0) bc.default_n0 = n0;
        AdaptConfig cfg;
        cfg.max_cells = max_cells;
        cfg.max_iters = max_iters;
        return run_to_list(run_adaptive(bc, cfg));
      },
      py::arg("case_name"), py::arg("max_cells") = 2000, py::arg("max_iters") = 10,
      py::arg("n0") = 0);

  m.def("eoc", [](const std::vector<double>& errors, const std::vector<double>& sizes,
                  const std::string& mode) {
    const auto table = eoc_table(errors, sizes, mode == "N" ? EOCMode::N : EOCMode::h);
    std::vector<double> orders;
    for (std::size_t i = 1; i < table.rows.size(); ++i) orders.push_back(table.rows[i].order);
    return orders;
  });

  m.def("parse_config", [](const std::string& text) {
    const auto cfg = parse_config(text);
    py::dict d;
    d["case"] = cfg.case_name;
    d["refine"] = cfg.refine;
    d["levels"] = cfg.levels;
    d["max_cells"] = cfg.max_cells;
    d["theta_mark"] = cfg.theta_mark;
    d["tol_ssn"] = cfg.tol_ssn;
    return d;
  });
}
