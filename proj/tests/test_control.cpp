#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "nxfem/control.hpp"
#include "nxfem/jet.hpp"

using namespace nxfem;

TEST(Projection, Examples) {
  const ControlBounds box{-0.5, 0.5};
  EXPECT_EQ(project_control(2.0, 1.0, box), -0.5);
  EXPECT_DOUBLE_EQ(project_control(0.2, 1.0, box), -0.2);
  EXPECT_DOUBLE_EQ(project_control(0.03, 0.01, ControlBounds{}), -3.0);
  EXPECT_FALSE(ControlBounds{}.bounded());
  EXPECT_TRUE(box.bounded());
  EXPECT_THROW(project_control(1.0, 0.0, box), std::invalid_argument);
  EXPECT_THROW(project_control(1.0, -1.0, box), std::invalid_argument);
}

TEST(Projection, IdempotentAndInsideBounds) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  std::uniform_real_distribution<double> pos(1e-4, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = val(rng);
    const double b = val(rng);
    const ControlBounds box{std::min(a, b), std::max(a, b)};
    const double nu = pos(rng);
    const double u = project_control(val(rng), nu, box);
    EXPECT_TRUE(box.contains(u));
    EXPECT_EQ(clamp_control(u, box), u);
    EXPECT_NEAR(project_control(-nu * u, nu, box), u, 1e-15 * std::max(1.0, std::abs(u)));
  }
}

TEST(Jet, ProductAndCompositionRules) {
  const Point p{0.3, -0.7};
  const Jet x = Jet::x(p);
  const Jet y = Jet::y(p);
  // f = x^2 y + sin(x y)
  const Jet f = x * x * y + sin(x * y);
  const double xy = p.x * p.y;
  EXPECT_NEAR(f.v, p.x * p.x * p.y + std::sin(xy), 1e-15);
  EXPECT_NEAR(f.gx, 2 * p.x * p.y + p.y * std::cos(xy), 1e-15);
  EXPECT_NEAR(f.gy, p.x * p.x + p.x * std::cos(xy), 1e-15);
  EXPECT_NEAR(f.hxx, 2 * p.y - p.y * p.y * std::sin(xy), 1e-15);
  EXPECT_NEAR(f.hyy, -p.x * p.x * std::sin(xy), 1e-15);
  EXPECT_NEAR(f.hxy, 2 * p.x + std::cos(xy) - xy * std::sin(xy), 1e-15);
  EXPECT_NEAR(f.laplacian(), f.hxx + f.hyy, 0.0);
}

TEST(Jet, PowerOfRadius) {
  const Point p{0.4, 0.3};
  const Jet r2 = Jet::x(p) * Jet::x(p) + Jet::y(p) * Jet::y(p);
  const Jet r3 = pow(r2, 1.5);
  const double r = std::hypot(p.x, p.y);
  EXPECT_NEAR(r3.v, r * r * r, 1e-15);
  EXPECT_NEAR(r3.gx, 3 * r * p.x, 1e-15);
  // lap |x|^3 = 9 |x| in two dimensions.
  EXPECT_NEAR(r3.laplacian(), 9 * r, 1e-14);
  const Jet at_origin = pow(Jet::x({0.0, 0.0}) * Jet::x({0.0, 0.0}), 1.5);
  EXPECT_EQ(at_origin.v, 0.0);
  EXPECT_TRUE(std::isfinite(at_origin.laplacian()));
}
