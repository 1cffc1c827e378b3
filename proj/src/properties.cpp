#include "nxfem/properties.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "nxfem/optctl.hpp"
#include "nxfem/reference_p1.hpp"

namespace nxfem {
namespace {

std::string label(const std::string& base, int example) {
  return base + " (example " + std::to_string(example) + ")";
}

double max_entry_difference(const CsrMatrix& a, const CsrMatrix& b) {
  double worst = 0.0;
  auto scan = [&](const CsrMatrix& x, const CsrMatrix& y) {
    for (int i = 0; i < x.rows(); ++i) {
      for (int k = x.offsets()[i]; k < x.offsets()[i + 1]; ++k) {
        const int j = x.columns()[k];
        worst = std::max(worst, std::abs(x.values()[k] - y.at(i, j)));
      }
    }
  };
  scan(a, b);
  scan(b, a);
  return worst;
}

CheckResult make_check(std::string name, bool passed, double worst, std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.passed = passed;
  c.worst = worst;
  c.detail = std::move(detail);
  return c;
}

CheckResult uncut_equivalence() {
  const Mesh mesh = build_uniform_mesh({{0.0, 0.0}, {1.0, 1.0}}, 8);
  const CutGeometry geo(mesh, LevelSet::constant(-1.0));
  const DofMap map(geo);
  const SystemMatrix a = assemble_stiffness(map, {1.0, 1.0}, {10.0});
  const SystemMatrix m = assemble_mass(map);
  const double da = max_entry_difference(a.free, reference::p1_stiffness(mesh));
  const double dm = max_entry_difference(m.free, reference::p1_mass(mesh));
  std::ostringstream os;
  os << "max |A - A_P1| = " << da << ", max |M - M_P1| = " << dm;
  return make_check("uncut P1 equivalence", da <= 1e-13 && dm <= 1e-13, std::max(da, dm), os.str());
}

CheckResult cut_fractions(int example, int n) {
  const ProblemSpec spec = make_example(example);
  const Mesh mesh = build_uniform_mesh(spec.domain, n);
  const CutGeometry geo(mesh, spec.levelset);
  double worst_sum = 0.0;
  double worst_area = 0.0;
  const auto cut = geo.cut_elements();
  for (int t : cut) {
    const CutInfo& c = geo.cell(t);
    worst_sum = std::max(worst_sum, std::abs(c.k1 + c.k2 - 1.0));
    double a1 = 0.0;
    for (const auto& piece : c.pieces) {
      if (piece.side == 1) a1 += piece.area;
    }
    worst_area = std::max(worst_area, std::abs(c.k1 * mesh.area(t) - a1) / mesh.area(t));
  }
  std::ostringstream os;
  os << cut.size() << " cut elements, max |k1+k2-1| = " << worst_sum
     << ", max relative side-1 area mismatch = " << worst_area;
  return make_check(label("cut fractions", example),
                    !cut.empty() && worst_sum <= 1e-14 && worst_area <= 1e-12,
                    std::max(worst_sum, worst_area), os.str());
}

CheckResult symmetry(int example, int n) {
  const ProblemSpec spec = make_example(example);
  const Mesh mesh = build_uniform_mesh(spec.domain, n);
  const CutGeometry geo(mesh, spec.levelset);
  const DofMap map(geo);
  const SystemMatrix a = assemble_stiffness(map, spec.coeffs, spec.nitsche);
  const double rel = a.free.max_asymmetry() / a.free.max_abs();
  std::ostringstream os;
  os << "max |A - A^T| / max |A| = " << rel;
  return make_check(label("stiffness symmetry", example), rel <= 1e-12, rel, os.str());
}

bool is_coercive(int example, int n, double ctilde) {
  ExampleOverrides overrides;
  overrides.ctilde = ctilde;
  const ProblemSpec spec = make_example(example, overrides);
  const Mesh mesh = build_uniform_mesh(spec.domain, n);
  const CutGeometry geo(mesh, spec.levelset);
  const DofMap map(geo);
  return dense_spd_check(assemble_stiffness(map, spec.coeffs, spec.nitsche).free);
}

CheckResult coercivity(int example, int n, double ctilde) {
  const bool spd = is_coercive(example, n, ctilde);
  std::ostringstream os;
  os << "dense Cholesky at N=" << n << ", C=" << ctilde << (spd ? " succeeds" : " fails");
  return make_check(label("coercivity", example), spd, 0.0, os.str());
}

CheckResult coercivity_loss(const std::vector<int>& examples, int n) {
  constexpr double small = 0.01;
  std::ostringstream os;
  bool any_lost = false;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const bool spd = is_coercive(examples[i], n, small);
    os << (i ? ", " : "") << "example " << examples[i] << (spd ? " SPD" : " not SPD");
    any_lost = any_lost || !spd;
  }
  return make_check("coercivity loss at C=0.01", any_lost, 0.0, os.str());
}

double patch_error(int n) {
  const ProblemSpec spec = make_patch_problem();
  const Discretization disc(spec, n);
  const FeFunction y = solve_state(disc, {});
  const Mesh& mesh = disc.mesh();
  double worst = 0.0;
  for (std::size_t ti = 0; ti < mesh.num_triangles(); ++ti) {
    const int t = static_cast<int>(ti);
    const auto corners = mesh.corners(t);
    const CutInfo& info = disc.geometry().cell(t);
    for (int side = 1; side <= 2; ++side) {
      if (!info.is_cut() && side != info.side) continue;
      for (int a = 0; a < 3; ++a) {
        std::array<double, 3> bary{};
        bary[a] = 1.0;
        worst = std::max(worst, std::abs(y.value(t, side, bary) - spec.y.value(corners[a], side)));
      }
    }
  }
  return worst;
}

CheckResult patch_reproduction() {
  const double cut = patch_error(9);
  const double fitted = patch_error(8);
  std::ostringstream os;
  os << "max nodal error: " << cut << " (N=9, interface cuts cells), " << fitted
     << " (N=8, interface on mesh edges)";
  return make_check("patch reproduction", cut <= 1e-10 && fitted <= 1e-10, std::max(cut, fitted),
                    os.str());
}

CheckResult projection_properties() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::uniform_real_distribution<double> pos(1e-3, 10.0);
  bool ok = true;
  for (int i = 0; i < 1000; ++i) {
    const double a = val(rng);
    const double b = val(rng);
    const ControlBounds bounds{std::min(a, b), std::max(a, b)};
    const double nu = pos(rng);
    const double p = val(rng);
    const double u = project_control(p, nu, bounds);
    const double again = project_control(-nu * u, nu, bounds);
    ok = ok && bounds.contains(u) && clamp_control(u, bounds) == u && std::abs(again - u) <= 1e-15 * std::max(1.0, std::abs(u));
  }
  return make_check("projection idempotence and bounds", ok, 0.0, "1000 random (p, nu, bounds)");
}

}  // namespace

ProblemSpec make_patch_problem() {
  ProblemSpec spec;
  spec.id = 0;
  spec.name = "piecewise linear patch";
  spec.domain = {{0.0, 0.0}, {1.0, 1.0}};
  spec.levelset = LevelSet::affine(1.0, 0.0, -0.5);
  spec.coeffs = {1.0, 2.0};
  spec.nu = 1.0;
  spec.nitsche.ctilde = 10.0;

  constexpr double slope1 = 1.0;
  constexpr double slope2 = 0.3;
  constexpr double cy = 0.7;
  constexpr double d = 0.2;
  spec.y = {[](Point x, int side) {
              return (side == 1 ? slope1 : slope2) * (x.x - 0.5) + cy * x.y + d;
            },
            [](Point, int side) { return Point{side == 1 ? slope1 : slope2, cy}; }};
  const ExactField zero{[](Point, int) { return 0.0; }, [](Point, int) { return Point{}; }};
  spec.p = zero;
  spec.u = zero;
  spec.f = [](Point, int) { return 0.0; };
  spec.y_d = [](Point, int) { return 0.0; };
  // n = (-1, 0) points into Omega_1 = {x1 < 0.5}.
  const Coefficients c = spec.coeffs;
  spec.g = [c](Point) { return -c.alpha1 * slope1 + c.alpha2 * slope2; };
  return spec;
}

std::vector<CheckResult> run_property_suite(const PropertyOptions& options) {
  std::vector<int> examples{1, 2, 3};
  if (options.example != 0) examples = {options.example};

  std::vector<CheckResult> out;
  out.push_back(uncut_equivalence());
  for (int ex : examples) out.push_back(cut_fractions(ex, options.cut_n));
  for (int ex : examples) out.push_back(symmetry(ex, options.coercivity_n));
  for (int ex : examples) {
    const double c = options.ctilde.value_or(make_example(ex).nitsche.ctilde);
    out.push_back(coercivity(ex, options.coercivity_n, c));
  }
  if (!options.ctilde) out.push_back(coercivity_loss(examples, options.coercivity_n));
  out.push_back(patch_reproduction());
  out.push_back(projection_properties());
  for (int ex : examples) {
    const ManufacturedReport report = verify_manufactured(make_example(ex));
    const CheckResult* bad = report.failed_check();
    std::string detail = bad ? "failed: " + bad->name + " (" + bad->detail + ")" : "all checks pass";
    double worst = 0.0;
    for (const auto& c : report.checks) worst = std::max(worst, c.worst);
    out.push_back(make_check(label("manufactured data", ex), report.passed(), worst, detail));
  }
  return out;
}

}  // namespace nxfem
