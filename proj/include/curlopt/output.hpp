#pragma once

#include <string>

#include "curlopt/adapt.hpp"

namespace curlopt {

// history.csv with the fixed column order
// iter,ncells,ndofs,h_max,J,ssn_iters,u_1..u_ell,est_st,est_adj,est_ocp,
// err_y_l2,err_y_hcurl,err_p_hcurl,err_u
// Error columns stay blank when the case has no exact solution. Byte-identical
// for identical runs.
std::string history_csv(const AdaptiveRun& run);

// Writes history.csv into dir (created if needed); returns the file path.
std::string write_outputs(const AdaptiveRun& run, const std::string& dir);

}  // namespace curlopt
