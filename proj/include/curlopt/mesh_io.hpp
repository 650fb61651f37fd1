#pragma once

#include <iosfwd>
#include <string>

#include "curlopt/space.hpp"

namespace curlopt {

// MSH version 2 ASCII subset: $Nodes / $Elements with element type 4 (tets);
// the first (physical) tag becomes the subdomain label. Other element types
// are ignored; the boundary is derived from the cell complex.
TetMesh read_msh(std::istream& in);
TetMesh read_msh_file(const std::string& path);

// Legacy VTK ASCII unstructured grid with CELL_DATA: subdomain labels and
// optional per-cell indicator scalars, plus a cell-averaged vector field
// (centroid values) with its magnitude.
struct VtkCellData {
  std::string name;
  VecX values;
};

void write_vtk(std::ostream& out, const TetMesh& mesh,
               const std::vector<VtkCellData>& cell_scalars = {},
               const FEField* field = nullptr, const std::string& field_name = "y");

void write_vtk_file(const std::string& path, const TetMesh& mesh,
                    const std::vector<VtkCellData>& cell_scalars = {},
                    const FEField* field = nullptr, const std::string& field_name = "y");

}  // namespace curlopt
