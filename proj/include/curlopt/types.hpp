#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SparseCore>
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace curlopt {

using Vec3 = Eigen::Vector3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;

// Vector field evaluated at a point; the cell id is passed so that data backed
// by discrete fields (or with per-cell branches) can be evaluated without a
// point-location search. Analytic data ignore it.
using FieldFn = std::function<Vec3(const Vec3&, int cell)>;
using ScalarFieldFn = std::function<double(const Vec3&, int cell)>;

inline FieldFn constant_field(const Vec3& c) {
  return [c](const Vec3&, int) { return c; };
}
inline FieldFn zero_field() { return constant_field(Vec3::Zero()); }
inline ScalarFieldFn zero_scalar_field() {
  return [](const Vec3&, int) { return 0.0; };
}

struct structural_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveReport {
  int iterations = 0;
  double relative_residual = 0.0;
  double wall_time_s = 0.0;
};

struct solver_error : std::runtime_error {
  SolveReport report;
  solver_error(const std::string& what, SolveReport r)
      : std::runtime_error(what), report(r) {}
};

}  // namespace curlopt
