#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "nxfem/problems.hpp"

using namespace nxfem;

namespace {

std::vector<Point> interface_points(const ProblemSpec& spec, int count) {
  std::vector<Point> out;
  if (const auto* c = std::get_if<LevelSet::Circle>(&spec.levelset.shape())) {
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * (i + 0.5) / count;
      out.push_back(c->center + c->radius * Point{std::cos(t), std::sin(t)});
    }
  } else {
    const auto& a = std::get<LevelSet::Affine>(spec.levelset.shape());
    for (int i = 0; i < count; ++i) {
      const double x = (i + 0.5) / count;
      const Point p{x, -(a.a * x + a.c) / a.b};
      if (p.y >= spec.domain.lo.y && p.y <= spec.domain.hi.y) out.push_back(p);
    }
  }
  return out;
}

std::vector<Point> volume_points(const ProblemSpec& spec, int count) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(spec.domain.lo.x, spec.domain.hi.x);
  std::uniform_real_distribution<double> uy(spec.domain.lo.y, spec.domain.hi.y);
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back({ux(rng), uy(rng)});
  return out;
}

}  // namespace

TEST(Examples, Parameters) {
  const ProblemSpec e1 = make_example(1);
  EXPECT_EQ(e1.coeffs.alpha1, 1.0);
  EXPECT_EQ(e1.coeffs.alpha2, 100.0);
  EXPECT_EQ(e1.nu, 0.01);
  EXPECT_EQ(e1.nitsche.ctilde, 10.0);
  EXPECT_FALSE(e1.bounds.bounded());
  EXPECT_TRUE(e1.relative_errors);

  const ProblemSpec e2 = make_example(2);
  EXPECT_EQ(e2.coeffs.alpha2, 10.0);
  EXPECT_EQ(e2.nitsche.ctilde, 1000.0);
  EXPECT_FALSE(e2.relative_errors);

  const ProblemSpec e3 = make_example(3);
  EXPECT_EQ(e3.coeffs.alpha2, 1000.0);
  EXPECT_EQ(e3.nu, 1.0);
  EXPECT_EQ(e3.nitsche.ctilde, 5.0);
  EXPECT_EQ(e3.bounds.lower, -0.5);
  EXPECT_EQ(e3.bounds.upper, 0.5);
}

TEST(Examples, InvalidRequests) {
  EXPECT_THROW(make_example(0), std::invalid_argument);
  EXPECT_THROW(make_example(4), std::invalid_argument);
  ExampleOverrides zero_nu;
  zero_nu.nu = 0.0;
  EXPECT_THROW(make_example(1, zero_nu), std::invalid_argument);
  ExampleOverrides negative_c;
  negative_c.ctilde = -1.0;
  EXPECT_THROW(make_example(1, negative_c), std::invalid_argument);
  ExampleOverrides radius_on_line;
  radius_on_line.radius = 0.3;
  EXPECT_THROW(make_example(1, radius_on_line), std::invalid_argument);
  ExampleOverrides bounds_on_unconstrained;
  bounds_on_unconstrained.upper = 1.0;
  EXPECT_THROW(make_example(2, bounds_on_unconstrained), std::invalid_argument);
  ExampleOverrides crossed;
  crossed.lower = 0.2;
  crossed.upper = 0.1;
  EXPECT_THROW(make_example(3, crossed), std::invalid_argument);
}

TEST(Examples, CostateIsScaledControlWithoutBounds) {
  for (int ex : {1, 2}) {
    const ProblemSpec spec = make_example(ex);
    for (Point x : volume_points(spec, 200)) {
      for (int side = 1; side <= 2; ++side) {
        EXPECT_NEAR(spec.p.value(x, side), -spec.nu * spec.u.value(x, side), 1e-15);
      }
    }
  }
}

TEST(Examples, CircleExampleHasNoFluxJump) {
  const ProblemSpec spec = make_example(2);
  for (Point x : interface_points(spec, 100)) EXPECT_NEAR(spec.g(x), 0.0, 1e-13);
}

TEST(Examples, ConstrainedControlIsClampedCostate) {
  const ProblemSpec spec = make_example(3);
  int at_bound = 0;
  for (Point x : volume_points(spec, 2000)) {
    const int side = spec.levelset.side(x);
    const double u = spec.u.value(x, side);
    EXPECT_EQ(u, project_control(spec.p.value(x, side), spec.nu, spec.bounds));
    EXPECT_TRUE(spec.bounds.contains(u));
    if (u == spec.bounds.lower || u == spec.bounds.upper) ++at_bound;
  }
  EXPECT_GT(at_bound, 0);
}

TEST(Examples, StateIsContinuousAcrossInterface) {
  for (int ex : {1, 2, 3}) {
    const ProblemSpec spec = make_example(ex);
    for (Point x : interface_points(spec, 50)) {
      EXPECT_NEAR(spec.y.value(x, 1), spec.y.value(x, 2), 1e-13) << ex;
    }
  }
}

TEST(Examples, OverridesRederiveData) {
  ExampleOverrides o;
  o.alpha2 = 50.0;
  o.radius = 0.4;
  const ProblemSpec spec = make_example(2, o);
  EXPECT_EQ(spec.coeffs.alpha2, 50.0);
  EXPECT_TRUE(verify_manufactured(spec).passed());
}

TEST(Manufactured, AllExamplesPass) {
  for (int ex : {1, 2, 3}) {
    const ManufacturedReport report = verify_manufactured(make_example(ex));
    EXPECT_TRUE(report.passed()) << "example " << ex << ": "
                                 << (report.failed_check() ? report.failed_check()->name : "");
    EXPECT_EQ(report.checks.size(), 6u);
    for (const auto& c : report.checks) {
      EXPECT_GT(c.samples, 0) << c.name;
      EXPECT_LE(c.worst, 1e-5) << c.name;
    }
  }
}

TEST(Manufactured, ConstrainedExampleSamplesActiveSet) {
  const ManufacturedReport report = verify_manufactured(make_example(3));
  for (const auto& c : report.checks) {
    if (c.name == "projection") {
      EXPECT_GT(c.active_samples, 0);
    }
  }
}

TEST(Manufactured, DetectsWrongSource) {
  ProblemSpec spec = make_example(1);
  const auto f = spec.f;
  spec.f = [f](Point x, int side) { return f(x, side) + (side == 2 ? 1e-2 : 0.0); };
  const ManufacturedReport report = verify_manufactured(spec);
  ASSERT_FALSE(report.passed());
  EXPECT_EQ(report.failed_check()->name, "state equation");
}

TEST(Manufactured, DetectsWrongFluxData) {
  ProblemSpec spec = make_example(3);
  const auto g = spec.g;
  spec.g = [g](Point x) { return -g(x); };
  const ManufacturedReport report = verify_manufactured(spec);
  ASSERT_FALSE(report.passed());
  EXPECT_EQ(report.failed_check()->name, "flux jump");
}

TEST(Manufactured, DetectsWrongDesiredState) {
  ProblemSpec spec = make_example(2);
  const auto yd = spec.y_d;
  spec.y_d = [yd](Point x, int side) { return yd(x, side) * 1.001; };
  const ManufacturedReport report = verify_manufactured(spec);
  ASSERT_FALSE(report.passed());
  EXPECT_EQ(report.failed_check()->name, "adjoint equation");
}
