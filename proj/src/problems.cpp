#include "nxfem/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "nxfem/jet.hpp"

namespace nxfem {
namespace {

using JetFormula = std::function<Jet(Point, int side)>;

ExactField field_from(const JetFormula& formula) {
  return {[formula](Point x, int side) { return formula(x, side).v; },
          [formula](Point x, int side) { return formula(x, side).gradient(); }};
}

/// Fills f, y_d and g from jet formulas for y and p:
///   f   = -alpha lap(y) - u
///   y_d = y + alpha lap(p)
///   g   = alpha1 d_n y1 - alpha2 d_n y2  (n: exact normal into Omega_1)
void derive_data(ProblemSpec& spec, const JetFormula& y, const JetFormula& p) {
  const Coefficients c = spec.coeffs;
  const ExactField u = spec.u;
  const LevelSet ls = spec.levelset;
  spec.y = field_from(y);
  spec.p = field_from(p);
  spec.f = [y, u, c](Point x, int side) { return -c(side) * y(x, side).laplacian() - u.value(x, side); };
  spec.y_d = [y, p, c](Point x, int side) { return y(x, side).v + c(side) * p(x, side).laplacian(); };
  spec.g = [y, c, ls](Point x) {
    const Point n = ls.normal(x);
    return c.alpha1 * dot(y(x, 1).gradient(), n) - c.alpha2 * dot(y(x, 2).gradient(), n);
  };
}

ProblemSpec segment_example(const ExampleOverrides& o) {
  ProblemSpec spec;
  spec.id = 1;
  spec.name = "segment interface, unconstrained control";
  spec.domain = {{0.0, 0.0}, {1.0, 1.0}};
  const double k = o.slope.value_or(-std::sqrt(3.0) / 3.0);
  const double b = o.intercept.value_or((6.0 + std::sqrt(6.0) - 2.0 * std::sqrt(3.0)) / 6.0);
  spec.levelset = LevelSet::line(k, b);
  spec.coeffs = {o.alpha1.value_or(1.0), o.alpha2.value_or(100.0)};
  spec.nu = o.nu.value_or(0.01);
  spec.nitsche.ctilde = o.ctilde.value_or(10.0);
  spec.relative_errors = true;

  const Coefficients c = spec.coeffs;
  const double nu = spec.nu;
  auto s = [k, b](Point x) { return Jet::y(x) - k * Jet::x(x) - b; };
  JetFormula y = [s, c](Point x, int side) {
    const Jet sx = s(x);
    const Jet base = (0.5 / c(side)) * (sx * cos(Jet::x(x) * Jet::y(x)));
    return side == 1 ? base + sx * sx * sx : base;
  };
  JetFormula u = [s, c](Point x, int side) {
    const Jet X = Jet::x(x);
    const Jet Y = Jet::y(x);
    const double a = side == 1 ? c.alpha2 : c.alpha1;
    return a * (s(x) * X * (X - 1.0) * Y * (Y - 1.0) * sin(X * Y));
  };
  JetFormula p = [u, nu](Point x, int side) { return -nu * u(x, side); };
  spec.u = field_from(u);
  derive_data(spec, y, p);
  return spec;
}

Jet radius_squared(Point x) {
  const Jet X = Jet::x(x);
  const Jet Y = Jet::y(x);
  return X * X + Y * Y;
}

/// 5 (|x|^2 - r^2)(x1^2 - 1)(x2^2 - 1) / alpha_side
JetFormula bubble(double r, Coefficients c) {
  return [r, c](Point x, int side) {
    const Jet X = Jet::x(x);
    const Jet Y = Jet::y(x);
    return (5.0 / c(side)) * ((radius_squared(x) - r * r) * (X * X - 1.0) * (Y * Y - 1.0));
  };
}

/// |x|^3 / alpha_side, shifted outside so that [y] = 0 on |x| = r.
JetFormula radial_state(double r, Coefficients c) {
  return [r, c](Point x, int side) {
    const Jet base = (1.0 / c(side)) * pow(radius_squared(x), 1.5);
    if (side == 1) return base;
    return base + (1.0 / c.alpha1 - 1.0 / c.alpha2) * r * r * r;
  };
}

ProblemSpec circle_example(const ExampleOverrides& o) {
  ProblemSpec spec;
  spec.id = 2;
  spec.name = "circle interface, unconstrained control";
  spec.domain = {{-1.0, -1.0}, {1.0, 1.0}};
  const double r = o.radius.value_or(0.5);
  spec.levelset = LevelSet::circle({0.0, 0.0}, r);
  spec.coeffs = {o.alpha1.value_or(1.0), o.alpha2.value_or(10.0)};
  spec.nu = o.nu.value_or(0.01);
  spec.nitsche.ctilde = o.ctilde.value_or(1000.0);
  spec.relative_errors = false;

  const double nu = spec.nu;
  const JetFormula u = bubble(r, spec.coeffs);
  JetFormula p = [u, nu](Point x, int side) { return -nu * u(x, side); };
  spec.u = field_from(u);
  derive_data(spec, radial_state(r, spec.coeffs), p);
  return spec;
}

ProblemSpec constrained_example(const ExampleOverrides& o) {
  ProblemSpec spec;
  spec.id = 3;
  spec.name = "circle interface, box-constrained control";
  spec.domain = {{-1.0, -1.0}, {1.0, 1.0}};
  const double r = o.radius.value_or(std::sqrt(3.0) / 4.0);
  spec.levelset = LevelSet::circle({0.0, 0.0}, r);
  spec.coeffs = {o.alpha1.value_or(1.0), o.alpha2.value_or(1000.0)};
  spec.nu = o.nu.value_or(1.0);
  spec.nitsche.ctilde = o.ctilde.value_or(5.0);
  spec.bounds = {o.lower.value_or(-0.5), o.upper.value_or(0.5)};
  spec.relative_errors = true;

  const double nu = spec.nu;
  const ControlBounds bounds = spec.bounds;
  const JetFormula radial = radial_state(r, spec.coeffs);
  JetFormula y = [radial, r](Point x, int side) {
    const Jet base = radial(x, side);
    if (side == 2) return base;
    return base - 10.0 * ((radius_squared(x) - r * r) * sin(Jet::x(x) * Jet::y(x)));
  };
  const JetFormula phi = bubble(r, spec.coeffs);
  JetFormula p = [phi, nu](Point x, int side) { return -nu * phi(x, side); };
  spec.u = {[phi, bounds](Point x, int side) { return clamp_control(phi(x, side).v, bounds); },
            [phi, bounds](Point x, int side) {
              const Jet j = phi(x, side);
              return bounds.contains(j.v) ? j.gradient() : Point{0.0, 0.0};
            }};
  derive_data(spec, y, p);
  return spec;
}

/// Random points on Gamma inside the domain.
std::vector<Point> interface_samples(const ProblemSpec& spec, int count, std::mt19937_64& rng) {
  std::vector<Point> out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Rectangle& d = spec.domain;
  auto inside = [&d](Point p) {
    return p.x >= d.lo.x && p.x <= d.hi.x && p.y >= d.lo.y && p.y <= d.hi.y;
  };
  int attempts = 0;
  while (static_cast<int>(out.size()) < count && attempts++ < 100 * count) {
    Point p;
    if (const auto* a = std::get_if<LevelSet::Affine>(&spec.levelset.shape())) {
      if (a->a == 0.0 && a->b == 0.0) break;
      if (std::abs(a->b) >= std::abs(a->a)) {
        p.x = d.lo.x + d.width() * unit(rng);
        p.y = -(a->a * p.x + a->c) / a->b;
      } else {
        p.y = d.lo.y + d.height() * unit(rng);
        p.x = -(a->b * p.y + a->c) / a->a;
      }
    } else {
      const auto& c = std::get<LevelSet::Circle>(spec.levelset.shape());
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      p = c.center + c.radius * Point{std::cos(theta), std::sin(theta)};
    }
    if (inside(p)) out.push_back(p);
  }
  return out;
}

void record(CheckResult& check, double residual, double scale, double tol) {
  const double scaled = std::abs(residual) / std::max(1.0, scale);
  check.worst = std::max(check.worst, scaled);
  if (!(scaled <= tol)) check.passed = false;
  ++check.samples;
}

}  // namespace

ProblemSpec make_example(int id, const ExampleOverrides& overrides) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("make_example: ") + what);
  };
  auto positive = [](const std::optional<double>& v) { return !v || *v > 0.0; };
  auto finite = [](const std::optional<double>& v) { return !v || std::isfinite(*v); };
  require(positive(overrides.nu), "nu must be positive");
  require(positive(overrides.ctilde), "ctilde must be positive");
  require(positive(overrides.alpha1) && positive(overrides.alpha2), "alpha must be positive");
  require(positive(overrides.radius), "radius must be positive");
  require(finite(overrides.nu) && finite(overrides.ctilde) && finite(overrides.alpha1) &&
              finite(overrides.alpha2) && finite(overrides.slope) && finite(overrides.intercept) &&
              finite(overrides.radius),
          "parameters must be finite");
  require(id == 1 || (!overrides.slope && !overrides.intercept),
          "slope/intercept only apply to example 1");
  require(id != 1 || !overrides.radius, "radius does not apply to example 1");
  require(id == 3 || (!overrides.lower && !overrides.upper), "bounds only apply to example 3");
  require(overrides.lower.value_or(-0.5) < overrides.upper.value_or(0.5),
          "lower bound must be below upper bound");
  switch (id) {
    case 1: return segment_example(overrides);
    case 2: return circle_example(overrides);
    case 3: return constrained_example(overrides);
    default: throw std::invalid_argument("make_example: unknown example " + std::to_string(id));
  }
}

bool ManufacturedReport::passed() const { return failed_check() == nullptr; }

const CheckResult* ManufacturedReport::failed_check() const {
  for (const auto& c : checks) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

namespace {

CheckResult passing_check(std::string name) {
  CheckResult c;
  c.name = std::move(name);
  c.passed = true;
  return c;
}

}  // namespace

ManufacturedReport verify_manufactured(const ProblemSpec& spec, const VerifyOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = options.step;
  const double tol = options.rel_tol;
  const Coefficients c = spec.coeffs;

  CheckResult gradient = passing_check("gradient");
  CheckResult state = passing_check("state equation");
  CheckResult adjoint = passing_check("adjoint equation");
  CheckResult continuity = passing_check("state continuity");
  CheckResult flux = passing_check("flux jump");
  CheckResult projection = passing_check("projection");

  const Point ex{1.0, 0.0};
  const Point ey{0.0, 1.0};
  auto fd_gradient = [h](const std::function<double(Point, int)>& f, Point x, int side) {
    return Point{(f(x + h * Point{1.0, 0.0}, side) - f(x - h * Point{1.0, 0.0}, side)) / (2 * h),
                 (f(x + h * Point{0.0, 1.0}, side) - f(x - h * Point{0.0, 1.0}, side)) / (2 * h)};
  };
  auto fd_laplacian = [&](const ExactField& fld, Point x, int side) {
    return (fld.gradient(x + h * ex, side).x - fld.gradient(x - h * ex, side).x +
            fld.gradient(x + h * ey, side).y - fld.gradient(x - h * ey, side).y) /
           (2 * h);
  };

  const Rectangle& d = spec.domain;
  for (int i = 0; i < options.sample_count; ++i) {
    for (int side = 1; side <= 2; ++side) {
      // Rejection sampling of a point on this side.
      Point x;
      bool found = false;
      for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
        x = {d.lo.x + d.width() * unit(rng), d.lo.y + d.height() * unit(rng)};
        found = spec.levelset.side(x) == side;
      }
      if (!found) continue;

      for (const ExactField* fld : {&spec.y, &spec.p}) {
        const Point fd = fd_gradient(fld->value, x, side);
        const Point ex_g = fld->gradient(x, side);
        record(gradient, nxfem::norm(fd - ex_g), nxfem::norm(ex_g), tol);
      }

      const double y = spec.y.value(x, side);
      const double u = spec.u.value(x, side);
      const double f = spec.f(x, side);
      const double flux_y = c(side) * fd_laplacian(spec.y, x, side);
      record(state, -flux_y - f - u, std::max({std::abs(flux_y), std::abs(f), std::abs(u)}), tol);

      const double yd = spec.y_d(x, side);
      const double flux_p = c(side) * fd_laplacian(spec.p, x, side);
      record(adjoint, -flux_p - (y - yd), std::max({std::abs(flux_p), std::abs(y), std::abs(yd)}),
             tol);

      const double p = spec.p.value(x, side);
      const double target = project_control(p, spec.nu, spec.bounds);
      record(projection, u - target, std::abs(u), tol);
      if (target == spec.bounds.lower || target == spec.bounds.upper) ++projection.active_samples;
    }
  }

  for (const Point& x : interface_samples(spec, options.sample_count, rng)) {
    const double y1 = spec.y.value(x, 1);
    const double y2 = spec.y.value(x, 2);
    record(continuity, y1 - y2, std::max(std::abs(y1), std::abs(y2)), tol);

    const Point n = spec.levelset.normal(x);
    auto dn = [&](int side) {
      return (spec.y.value(x + h * n, side) - spec.y.value(x - h * n, side)) / (2 * h);
    };
    const double jump = c.alpha1 * dn(1) - c.alpha2 * dn(2);
    const double g = spec.g(x);
    record(flux, jump - g, std::max(std::abs(jump), std::abs(g)), tol);
  }

  ManufacturedReport report;
  for (CheckResult* check : {&gradient, &state, &adjoint, &continuity, &flux, &projection}) {
    std::ostringstream os;
    os << check->samples << " samples, worst scaled residual " << check->worst;
    if (check == &projection) os << ", " << check->active_samples << " on a bound";
    check->detail = os.str();
    report.checks.push_back(std::move(*check));
  }
  return report;
}

}  // namespace nxfem
