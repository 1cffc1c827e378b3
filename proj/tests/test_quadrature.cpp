#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "nxfem/quadrature.hpp"

using namespace nxfem;

namespace {

// Exact integral of x^i y^j over the reference triangle (0,0),(1,0),(0,1),
// divided by its area 1/2: 2 i! j! / (i + j + 2)!.
double reference_moment(int i, int j) {
  return 2.0 * std::tgamma(i + 1) * std::tgamma(j + 1) / std::tgamma(i + j + 3);
}

}  // namespace

class TriangleRuleExactness : public ::testing::TestWithParam<int> {};

TEST_P(TriangleRuleExactness, IntegratesMonomials) {
  const int degree = GetParam();
  const TriangleRule& rule = triangle_rule(degree);
  EXPECT_EQ(rule.degree, degree);
  double wsum = 0.0;
  for (double w : rule.weights) {
    EXPECT_GT(w, 0.0);
    wsum += w;
  }
  EXPECT_NEAR(wsum, 1.0, 1e-14);
  for (int i = 0; i <= degree; ++i) {
    for (int j = 0; i + j <= degree; ++j) {
      double q = 0.0;
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const auto& b = rule.points[k];
        EXPECT_NEAR(b[0] + b[1] + b[2], 1.0, 1e-15);
        q += rule.weights[k] * std::pow(b[1], i) * std::pow(b[2], j);
      }
      EXPECT_NEAR(q, reference_moment(i, j), 1e-13) << "x^" << i << " y^" << j;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Degrees, TriangleRuleExactness, ::testing::Values(2, 4, 6));

TEST(GaussRule, IntegratesPolynomials) {
  for (int n : {2, 3}) {
    const SegmentRule& rule = gauss_rule(n);
    EXPECT_EQ(rule.degree, 2 * n - 1);
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double q = 0.0;
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        EXPECT_GT(rule.weights[k], 0.0);
        q += rule.weights[k] * std::pow(rule.points[k], p);
      }
      EXPECT_NEAR(q, 1.0 / (p + 1), 1e-14) << "n=" << n << " p=" << p;
    }
  }
}

TEST(Quadrature, UnsupportedRules) {
  EXPECT_THROW(triangle_rule(3), std::invalid_argument);
  EXPECT_THROW(triangle_rule(8), std::invalid_argument);
  EXPECT_THROW(gauss_rule(1), std::invalid_argument);
  EXPECT_THROW(gauss_rule(5), std::invalid_argument);
}
