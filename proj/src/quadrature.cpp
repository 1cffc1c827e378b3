#include "nxfem/quadrature.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nxfem {
namespace {

void add_orbit3(TriangleRule& rule, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  rule.points.push_back({b, a, a});
  rule.points.push_back({a, b, a});
  rule.points.push_back({a, a, b});
  for (int i = 0; i < 3; ++i) rule.weights.push_back(w);
}

void add_orbit6(TriangleRule& rule, double a, double b, double w) {
  const double c = 1.0 - a - b;
  rule.points.push_back({a, b, c});
  rule.points.push_back({a, c, b});
  rule.points.push_back({b, a, c});
  rule.points.push_back({b, c, a});
  rule.points.push_back({c, a, b});
  rule.points.push_back({c, b, a});
  for (int i = 0; i < 6; ++i) rule.weights.push_back(w);
}

TriangleRule make_degree2() {
  TriangleRule r;
  r.degree = 2;
  add_orbit3(r, 1.0 / 6.0, 1.0 / 3.0);
  return r;
}

TriangleRule make_degree4() {
  TriangleRule r;
  r.degree = 4;
  add_orbit3(r, 0.445948490915965, 0.223381589678011);
  add_orbit3(r, 0.091576213509771, 0.109951743655322);
  return r;
}

TriangleRule make_degree6() {
  TriangleRule r;
  r.degree = 6;
  add_orbit3(r, 0.249286745170910, 0.116786275726379);
  add_orbit3(r, 0.063089014491502, 0.050844906370207);
  add_orbit6(r, 0.053145049844817, 0.310352451033784, 0.082851075618374);
  return r;
}

SegmentRule make_gauss2() {
  const double d = 0.5 / std::sqrt(3.0);
  return {3, {0.5 - d, 0.5 + d}, {0.5, 0.5}};
}

SegmentRule make_gauss3() {
  const double d = 0.5 * std::sqrt(0.6);
  return {5, {0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0}};
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule d2 = make_degree2();
  static const TriangleRule d4 = make_degree4();
  static const TriangleRule d6 = make_degree6();
  switch (degree) {
    case 2: return d2;
    case 4: return d4;
    case 6: return d6;
    default:
      throw std::invalid_argument("triangle_rule: unsupported degree " + std::to_string(degree));
  }
}

const SegmentRule& gauss_rule(int num_points) {
  static const SegmentRule g2 = make_gauss2();
  static const SegmentRule g3 = make_gauss3();
  switch (num_points) {
    case 2: return g2;
    case 3: return g3;
    default:
      throw std::invalid_argument("gauss_rule: unsupported point count " +
                                  std::to_string(num_points));
  }
}

}  // namespace nxfem
