#include "curlopt/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace curlopt {

namespace {

QuadratureRule make_tet_deg1() {
  QuadratureRule r;
  r.degree = 1;
  r.points = {{0.25, 0.25, 0.25, 0.25}};
  r.weights = {1.0};
  return r;
}

QuadratureRule make_tet_deg2() {
  QuadratureRule r;
  r.degree = 2;
  const double a = 0.5854101966249685;  // (5 + 3*sqrt(5)) / 20
  const double b = 0.1381966011250105;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> p = {b, b, b, b};
    p[i] = a;
    r.points.push_back(p);
    r.weights.push_back(0.25);
  }
  return r;
}

void push_orbit4(QuadratureRule& r, double a, double b, double w) {
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> p = {b, b, b, b};
    p[i] = a;
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

void push_orbit6(QuadratureRule& r, double a, double b, double w) {
  static const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (auto& pr : pairs) {
    std::array<double, 4> p = {b, b, b, b};
    p[pr[0]] = a;
    p[pr[1]] = a;
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

// 14-point degree-5 rule (Keast family), all weights positive.
QuadratureRule make_tet_deg5() {
  QuadratureRule r;
  r.degree = 5;
  push_orbit4(r, 1.0 - 3 * 0.3108859192633005, 0.3108859192633005, 0.1126879257180162);
  push_orbit4(r, 1.0 - 3 * 0.0927352503108912, 0.0927352503108912, 0.0734930431163619);
  push_orbit6(r, 0.4544962958743506, 0.0455037041256494, 0.0425460207770812);
  return r;
}

QuadratureRule make_tri_deg2() {
  QuadratureRule r;
  r.degree = 2;
  r.points = {{0.5, 0.5, 0.0, 0.0}, {0.0, 0.5, 0.5, 0.0}, {0.5, 0.0, 0.5, 0.0}};
  r.weights = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  return r;
}

QuadratureRule make_tri_deg4() {
  QuadratureRule r;
  r.degree = 4;
  const double a1 = 0.108103018168070, b1 = 0.445948490915965, w1 = 0.223381589678011;
  const double a2 = 0.816847572980459, b2 = 0.091576213509771, w2 = 0.109951743655322;
  for (int i = 0; i < 3; ++i) {
    std::array<double, 4> p = {b1, b1, b1, 0.0};
    p[i] = a1;
    r.points.push_back(p);
    r.weights.push_back(w1);
  }
  for (int i = 0; i < 3; ++i) {
    std::array<double, 4> p = {b2, b2, b2, 0.0};
    p[i] = a2;
    r.points.push_back(p);
    r.weights.push_back(w2);
  }
  return r;
}

void subdivide_tet(const std::array<Vec3, 4>& t, int levels,
                   std::vector<std::array<Vec3, 4>>& out) {
  if (levels == 0) {
    out.push_back(t);
    return;
  }
  const Vec3 m01 = 0.5 * (t[0] + t[1]);
  const Vec3 m02 = 0.5 * (t[0] + t[2]);
  const Vec3 m03 = 0.5 * (t[0] + t[3]);
  const Vec3 m12 = 0.5 * (t[1] + t[2]);
  const Vec3 m13 = 0.5 * (t[1] + t[3]);
  const Vec3 m23 = 0.5 * (t[2] + t[3]);
  const std::array<std::array<Vec3, 4>, 8> children = {{
      {t[0], m01, m02, m03},
      {t[1], m01, m12, m13},
      {t[2], m02, m12, m23},
      {t[3], m03, m13, m23},
      // octahedron fan around the (m01, m23) diagonal
      {m01, m23, m02, m12},
      {m01, m23, m12, m13},
      {m01, m23, m13, m03},
      {m01, m23, m03, m02},
  }};
  for (const auto& c : children) subdivide_tet(c, levels - 1, out);
}

}  // namespace

const QuadratureRule& tet_rule(int degree) {
  static const QuadratureRule d1 = make_tet_deg1();
  static const QuadratureRule d2 = make_tet_deg2();
  static const QuadratureRule d5 = make_tet_deg5();
  if (degree <= 1) return d1;
  if (degree <= 2) return d2;
  if (degree <= 5) return d5;
  throw std::invalid_argument("tet_rule: degree > 5 not tabulated");
}

const QuadratureRule& tri_rule(int degree) {
  static const QuadratureRule d2 = make_tri_deg2();
  static const QuadratureRule d4 = make_tri_deg4();
  if (degree <= 2) return d2;
  if (degree <= 4) return d4;
  throw std::invalid_argument("tri_rule: degree > 4 not tabulated");
}

const std::array<double, 3>& edge_gauss_points() {
  static const std::array<double, 3> pts = {0.5 * (1.0 - std::sqrt(3.0 / 5.0)), 0.5,
                                            0.5 * (1.0 + std::sqrt(3.0 / 5.0))};
  return pts;
}

const std::array<double, 3>& edge_gauss_weights() {
  static const std::array<double, 3> w = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
  return w;
}

double tet_volume(const std::array<Vec3, 4>& t) {
  return (t[1] - t[0]).cross(t[2] - t[0]).dot(t[3] - t[0]) / 6.0;
}

double triangle_area(const std::array<Vec3, 3>& t) {
  return 0.5 * (t[1] - t[0]).cross(t[2] - t[0]).norm();
}

MappedQuadrature map_to_tet(const QuadratureRule& rule, const std::array<Vec3, 4>& tet,
                            int subdivision_levels) {
  std::vector<std::array<Vec3, 4>> pieces;
  subdivide_tet(tet, subdivision_levels, pieces);
  MappedQuadrature q;
  q.points.reserve(pieces.size() * rule.points.size());
  q.weights.reserve(pieces.size() * rule.points.size());
  for (const auto& piece : pieces) {
    const double vol = std::abs(tet_volume(piece));
    for (std::size_t i = 0; i < rule.points.size(); ++i) {
      const auto& l = rule.points[i];
      q.points.push_back(l[0] * piece[0] + l[1] * piece[1] + l[2] * piece[2] +
                         l[3] * piece[3]);
      q.weights.push_back(rule.weights[i] * vol);
    }
  }
  return q;
}

MappedQuadrature map_to_triangle(const QuadratureRule& rule, const std::array<Vec3, 3>& tri) {
  MappedQuadrature q;
  const double area = triangle_area(tri);
  q.points.reserve(rule.points.size());
  q.weights.reserve(rule.points.size());
  for (std::size_t i = 0; i < rule.points.size(); ++i) {
    const auto& l = rule.points[i];
    q.points.push_back(l[0] * tri[0] + l[1] * tri[1] + l[2] * tri[2]);
    q.weights.push_back(rule.weights[i] * area);
  }
  return q;
}

}  // namespace curlopt
