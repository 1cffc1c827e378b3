#pragma once

#include <array>
#include <vector>

namespace nxfem {

/// Quadrature on the reference simplex. Triangle points are barycentric
/// coordinates with weights summing to 1 (multiply by the triangle area);
/// segment points are parameters in [0, 1] with weights summing to 1.
struct TriangleRule {
  int degree = 0;
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
};

struct SegmentRule {
  int degree = 0;
  std::vector<double> points;
  std::vector<double> weights;
};

/// Symmetric Dunavant rules for degree 2, 4 or 6.
const TriangleRule& triangle_rule(int degree);

/// Gauss-Legendre rule with 2 or 3 points.
const SegmentRule& gauss_rule(int num_points);

}  // namespace nxfem
