#pragma once

#include <array>
#include <vector>

#include "curlopt/types.hpp"

namespace curlopt {

// Quadrature rule in barycentric coordinates. Weights sum to one and are
// applied against the measure of the simplex (volume or area).
struct QuadratureRule {
  int degree = 0;
  std::vector<std::array<double, 4>> points;  // barycentric (last entry unused for triangles)
  std::vector<double> weights;
};

// Tetrahedron rules: degree 1 (1 pt), degree 2 (4 pt), degree 5 (14 pt).
// All weights positive.
const QuadratureRule& tet_rule(int degree);

// Triangle rules: degree 2 (3 pt midpoints), degree 4 (6 pt Dunavant).
const QuadratureRule& tri_rule(int degree);

// 3-point Gauss-Legendre on [0,1].
const std::array<double, 3>& edge_gauss_points();
const std::array<double, 3>& edge_gauss_weights();

// Quadrature points of `rule` mapped to the physical tet, with combined
// weights w_q * |T|. With `subdivision_levels` > 0 the tet is recursively
// octasected first; used near the r^{-1/3} line singularity of the L-shape
// case where a fixed-order rule loses too much accuracy.
struct MappedQuadrature {
  std::vector<Vec3> points;
  std::vector<double> weights;
};
MappedQuadrature map_to_tet(const QuadratureRule& rule,
                            const std::array<Vec3, 4>& tet,
                            int subdivision_levels = 0);

MappedQuadrature map_to_triangle(const QuadratureRule& rule,
                                 const std::array<Vec3, 3>& tri);

double tet_volume(const std::array<Vec3, 4>& tet);
double triangle_area(const std::array<Vec3, 3>& tri);

}  // namespace curlopt
