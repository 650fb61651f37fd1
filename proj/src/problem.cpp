#include "curlopt/problem.hpp"

#include <atomic>
#include <stdexcept>

namespace curlopt {

namespace {
std::atomic<long> g_data_ids{0};
}

DataStamp::DataStamp() : id(++g_data_ids) {}
DataStamp::DataStamp(const DataStamp&) : id(++g_data_ids) {}
DataStamp& DataStamp::operator=(const DataStamp&) {
  id = ++g_data_ids;
  return *this;
}

void ProblemData::validate() const {
  if (alpha <= 0.0) throw std::domain_error("ProblemData: alpha must be positive");
  if (chi.size() != ell || kappa.size() != ell || lower.size() != ell ||
      upper.size() != ell)
    throw std::domain_error("ProblemData: coefficient/bound sizes must equal ell");
  for (int k = 0; k < ell; ++k) {
    if (chi[k] <= 0.0 || kappa[k] <= 0.0)
      throw std::domain_error("ProblemData: chi and kappa must be positive");
    if (!(0.0 < lower[k] && lower[k] < upper[k]))
      throw std::domain_error("ProblemData: bounds must satisfy 0 < a < b");
  }
}

std::vector<double> ProblemData::chi_cellwise(const TetMesh& mesh) const {
  std::vector<double> v(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) v[c] = chi[mesh.subdomain[c] - 1];
  return v;
}

std::vector<double> ProblemData::kappa_u_cellwise(const TetMesh& mesh, const VecX& u) const {
  std::vector<double> v(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const int k = mesh.subdomain[c] - 1;
    v[c] = kappa[k] * u[k];
  }
  return v;
}

std::vector<double> ProblemData::kappa_indicator_cellwise(const TetMesh& mesh, int k) const {
  std::vector<double> v(mesh.n_cells(), 0.0);
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.subdomain[c] - 1 == k) v[c] = kappa[k];
  return v;
}

}  // namespace curlopt
