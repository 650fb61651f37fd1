#pragma once

#include <string>

#include "curlopt/adapt.hpp"

namespace curlopt {

struct RunConfig {
  std::string case_name;                // required
  std::string refine = "adaptive";      // uniform | adaptive
  int n0 = 0;                           // 0 = case default
  int levels = 4;                       // uniform mode
  long max_cells = 100000;
  int max_iters = 60;
  double theta_mark = 0.5;
  double tol_ssn = 1e-9;
  double tol_linear = 1e-10;
  std::string out_dir = "out";
  int vtk_every = 0;  // 0 = off

  AdaptConfig adapt_config() const {
    AdaptConfig c;
    c.max_cells = max_cells;
    c.max_iters = max_iters;
    c.theta = theta_mark;
    c.tol_ssn = tol_ssn;
    c.tol_linear = tol_linear;
    return c;
  }
};

struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// key=value lines, '#' comments. Unknown keys and out-of-domain values are
// rejected with the offending key and line number.
RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

}  // namespace curlopt
