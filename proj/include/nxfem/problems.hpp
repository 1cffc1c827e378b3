#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nxfem/assembly.hpp"
#include "nxfem/control.hpp"
#include "nxfem/geometry.hpp"
#include "nxfem/mesh.hpp"

namespace nxfem {

/// Exact field given per subdomain. Each side's formula is a smooth function
/// that may also be evaluated a little outside its subdomain.
struct ExactField {
  std::function<double(Point, int side)> value;
  std::function<Point(Point, int side)> gradient;
};

struct ProblemSpec {
  int id = 0;
  std::string name;
  Rectangle domain;
  LevelSet levelset = LevelSet::constant(-1.0);
  Coefficients coeffs;
  double nu = 1.0;
  ControlBounds bounds;
  NitscheParams nitsche;
  bool relative_errors = true;

  ExactField y;
  ExactField p;
  ExactField u;

  SideFunction f;
  SideFunction y_d;
  /// [alpha d_n y] on the interface, using the exact level-set normal.
  InterfaceFunction g;

  /// Boundary values of the state on each side (the exact y, extended across
  /// Gamma by its side formula).
  double dirichlet(Point x, int side) const { return y.value(x, side); }
};

/// Parameters that may replace an example's defaults. The manufactured data
/// are re-derived from the same exact formulas. slope/intercept apply to the
/// straight interface of example 1, radius to the circles of examples 2 and 3,
/// lower/upper to the constrained example 3.
struct ExampleOverrides {
  std::optional<double> nu;
  std::optional<double> ctilde;
  std::optional<double> alpha1;
  std::optional<double> alpha2;
  std::optional<double> slope;
  std::optional<double> intercept;
  std::optional<double> radius;
  std::optional<double> lower;
  std::optional<double> upper;
};

/// Benchmarks 1 (straight interface, unconstrained), 2 (circle, unconstrained)
/// and 3 (circle, box-constrained control). Throws std::invalid_argument for
/// other ids and for overrides that are invalid or do not apply to the example.
ProblemSpec make_example(int id, const ExampleOverrides& overrides = {});

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest scaled residual seen
  int samples = 0;
  int active_samples = 0;  // projection check: samples where a bound is attained
  std::string detail;
};

struct ManufacturedReport {
  std::vector<CheckResult> checks;
  bool passed() const;
  const CheckResult* failed_check() const;
};

struct VerifyOptions {
  int sample_count = 200;
  double step = 1e-5;
  double rel_tol = 1e-5;
  std::uint64_t seed = 20190417;
};

/// Checks the manufactured data against the exact fields with central
/// differences at random points:
///   gradient     exact gradients vs differences of the values
///   state        -div(alpha grad y) - f - u = 0
///   adjoint      -div(alpha grad p) - (y - y_d) = 0
///   continuity   [y] = 0 on Gamma
///   flux jump    [alpha d_n y] - g = 0 on Gamma
///   projection   u = clamp(-p / nu)
ManufacturedReport verify_manufactured(const ProblemSpec& spec, const VerifyOptions& options = {});

}  // namespace nxfem
