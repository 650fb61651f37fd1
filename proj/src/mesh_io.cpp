#include "curlopt/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace curlopt {

namespace {

[[noreturn]] void io_fail(const std::string& msg) { throw structural_error("msh: " + msg); }

std::string next_token_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line)) {
    // strip CR and whitespace-only lines
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (!line.empty()) return line;
  }
  return {};
}

}  // namespace

TetMesh read_msh(std::istream& in) {
  TetMesh mesh;
  std::map<long, int> node_id;  // file id -> dense id
  std::string line;
  while (!(line = next_token_line(in)).empty()) {
    if (line == "$MeshFormat") {
      std::string fmt = next_token_line(in);
      std::istringstream ss(fmt);
      double version;
      int file_type;
      ss >> version >> file_type;
      if (!ss || version < 2.0 || version >= 3.0 || file_type != 0)
        io_fail("unsupported format line '" + fmt + "' (need ASCII version 2)");
      if (next_token_line(in) != "$EndMeshFormat") io_fail("missing $EndMeshFormat");
    } else if (line == "$Nodes") {
      long n = std::stol(next_token_line(in));
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(next_token_line(in));
        long id;
        double x, y, z;
        ss >> id >> x >> y >> z;
        if (!ss) io_fail("bad node line");
        node_id[id] = mesh.n_vertices();
        mesh.vertices.emplace_back(x, y, z);
      }
      if (next_token_line(in) != "$EndNodes") io_fail("missing $EndNodes");
    } else if (line == "$Elements") {
      long n = std::stol(next_token_line(in));
      for (long i = 0; i < n; ++i) {
        std::istringstream ss(next_token_line(in));
        long id;
        int type, ntags;
        ss >> id >> type >> ntags;
        std::vector<long> tags(ntags);
        for (auto& t : tags) ss >> t;
        if (type != 4) continue;  // tets only; surface elements are ignored
        std::array<int, 4> cell;
        for (auto& v : cell) {
          long nid;
          ss >> nid;
          auto it = node_id.find(nid);
          if (it == node_id.end()) io_fail("element references unknown node");
          v = it->second;
        }
        if (!ss) io_fail("bad element line");
        mesh.cells.push_back(cell);
        mesh.subdomain.push_back(ntags > 0 && tags[0] > 0 ? static_cast<int>(tags[0]) : 1);
      }
      if (next_token_line(in) != "$EndElements") io_fail("missing $EndElements");
    } else if (!line.empty() && line[0] == '$') {
      // skip unknown section
      const std::string end = "$End" + line.substr(1);
      while (!(line = next_token_line(in)).empty() && line != end) {
      }
    }
  }
  if (mesh.cells.empty()) io_fail("no tetrahedra found");
  // Repair orientation: MSH files may store either sign.
  for (auto& c : mesh.cells) {
    const double v = (mesh.vertices[c[1]] - mesh.vertices[c[0]])
                         .cross(mesh.vertices[c[2]] - mesh.vertices[c[0]])
                         .dot(mesh.vertices[c[3]] - mesh.vertices[c[0]]);
    if (v < 0) std::swap(c[2], c[3]);
  }
  mesh.boundary_faces.clear();
  {
    std::map<std::array<int, 3>, int> count;
    for (const auto& c : mesh.cells)
      for (const auto& lf : kLocalFaces) {
        std::array<int, 3> f = {c[lf[0]], c[lf[1]], c[lf[2]]};
        std::sort(f.begin(), f.end());
        ++count[f];
      }
    for (const auto& [f, cnt] : count) {
      if (cnt > 2) io_fail("face shared by more than two tets");
      if (cnt == 1) mesh.boundary_faces.push_back(f);
    }
  }
  mesh.validate();
  return mesh;
}

TetMesh read_msh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw structural_error("msh: cannot open " + path);
  return read_msh(in);
}

void write_vtk(std::ostream& out, const TetMesh& mesh,
               const std::vector<VtkCellData>& cell_scalars, const FEField* field,
               const std::string& field_name) {
  char buf[128];
  out << "# vtk DataFile Version 3.0\n";
  out << "curlopt mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.n_vertices() << " double\n";
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  out << "CELLS " << mesh.n_cells() << " " << 5L * mesh.n_cells() << "\n";
  for (const auto& c : mesh.cells)
    out << "4 " << c[0] << " " << c[1] << " " << c[2] << " " << c[3] << "\n";
  out << "CELL_TYPES " << mesh.n_cells() << "\n";
  for (int i = 0; i < mesh.n_cells(); ++i) out << "10\n";

  out << "CELL_DATA " << mesh.n_cells() << "\n";
  out << "SCALARS subdomain int 1\nLOOKUP_TABLE default\n";
  for (int s : mesh.subdomain) out << s << "\n";
  for (const auto& data : cell_scalars) {
    out << "SCALARS " << data.name << " double 1\nLOOKUP_TABLE default\n";
    for (int i = 0; i < data.values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.12g\n", data.values[i]);
      out << buf;
    }
  }
  if (field) {
    out << "VECTORS " << field_name << " double\n";
    std::vector<double> mag(mesh.n_cells());
    for (int c = 0; c < mesh.n_cells(); ++c) {
      const Vec3 v = field->value(c, mesh.cell_centroid(c));
      mag[c] = v.norm();
      std::snprintf(buf, sizeof buf, "%.12g %.12g %.12g\n", v.x(), v.y(), v.z());
      out << buf;
    }
    out << "SCALARS " << field_name << "_magnitude double 1\nLOOKUP_TABLE default\n";
    for (int c = 0; c < mesh.n_cells(); ++c) {
      std::snprintf(buf, sizeof buf, "%.12g\n", mag[c]);
      out << buf;
    }
  }
}

void write_vtk_file(const std::string& path, const TetMesh& mesh,
                    const std::vector<VtkCellData>& cell_scalars, const FEField* field,
                    const std::string& field_name) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("vtk: cannot open " + path + " for writing");
  write_vtk(out, mesh, cell_scalars, field, field_name);
  if (!out) throw std::runtime_error("vtk: write failed for " + path);
}

}  // namespace curlopt
