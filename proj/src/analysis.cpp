#include "nxfem/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace nxfem {
namespace {

template <typename Integrand>
double integrate_sides(const CutGeometry& geo, int degree, Integrand&& integrand) {
  const Mesh& mesh = geo.mesh();
  double total = 0.0;
  for (std::size_t ti = 0; ti < mesh.num_triangles(); ++ti) {
    const int t = static_cast<int>(ti);
    for (const auto& q : volume_quadrature(mesh.corners(t), geo.cell(t), degree)) {
      total += q.weight * integrand(t, q);
    }
  }
  return total;
}

}  // namespace

DiscreteField as_field(const FeFunction& fun) {
  return {[&fun](int t, int side, const std::array<double, 3>& b) { return fun.value(t, side, b); },
          [&fun](int t, int side, const std::array<double, 3>&) { return fun.gradient(t, side); }};
}

DiscreteField as_field(const ImplicitControl& control) {
  return {[&control](int t, int side, const std::array<double, 3>& b) {
            return control.value(t, side, b);
          },
          [&control](int t, int side, const std::array<double, 3>& b) {
            return control.gradient(t, side, b);
          }};
}

DiscreteField as_field(const ExactField& exact, const Mesh& mesh) {
  auto locate = [&mesh](int t, const std::array<double, 3>& b) {
    const auto c = mesh.corners(t);
    return b[0] * c[0] + b[1] * c[1] + b[2] * c[2];
  };
  return {[&exact, locate](int t, int side, const std::array<double, 3>& b) {
            return exact.value(locate(t, b), side);
          },
          [&exact, locate](int t, int side, const std::array<double, 3>& b) {
            return exact.gradient(locate(t, b), side);
          }};
}

double broken_l2_error(const CutGeometry& geo, const DiscreteField& approx,
                       const ExactField& exact, int degree) {
  return std::sqrt(integrate_sides(geo, degree, [&](int t, const VolumePoint& q) {
    const double e = approx.value(t, q.side, q.bary) - exact.value(q.x, q.side);
    return e * e;
  }));
}

double broken_h1_semi_error(const CutGeometry& geo, const DiscreteField& approx,
                            const ExactField& exact, int degree) {
  return std::sqrt(integrate_sides(geo, degree, [&](int t, const VolumePoint& q) {
    const Point e = approx.gradient(t, q.side, q.bary) - exact.gradient(q.x, q.side);
    return dot(e, e);
  }));
}

double triple_norm_error(const CutGeometry& geo, const DiscreteField& approx,
                         const ExactField& exact, int degree) {
  const double grad = broken_h1_semi_error(geo, approx, exact, degree);
  const Mesh& mesh = geo.mesh();
  double flux = 0.0;
  double jump = 0.0;
  for (int t : geo.cut_elements()) {
    const CutInfo& info = geo.cell(t);
    const double h = mesh.diameter(t);
    const Point n = info.normal;
    for (const auto& q : interface_quadrature(mesh.corners(t), info)) {
      const double e1 = approx.value(t, 1, q.bary) - exact.value(q.x, 1);
      const double e2 = approx.value(t, 2, q.bary) - exact.value(q.x, 2);
      const double d1 = dot(approx.gradient(t, 1, q.bary) - exact.gradient(q.x, 1), n);
      const double d2 = dot(approx.gradient(t, 2, q.bary) - exact.gradient(q.x, 2), n);
      const double avg = info.k1 * d1 + info.k2 * d2;
      flux += h * q.weight * avg * avg;
      jump += q.weight * (e1 - e2) * (e1 - e2) / h;
    }
  }
  return std::sqrt(grad * grad + flux + jump);
}

double broken_l2_norm(const CutGeometry& geo, const ExactField& exact, int degree) {
  return std::sqrt(integrate_sides(geo, degree, [&](int, const VolumePoint& q) {
    const double v = exact.value(q.x, q.side);
    return v * v;
  }));
}

double broken_h1_seminorm(const CutGeometry& geo, const ExactField& exact, int degree) {
  return std::sqrt(integrate_sides(geo, degree, [&](int, const VolumePoint& q) {
    const Point g = exact.gradient(q.x, q.side);
    return dot(g, g);
  }));
}

std::vector<std::optional<double>> eoc(std::span<const double> errors,
                                       std::span<const double> hs) {
  if (errors.size() != hs.size()) throw std::invalid_argument("eoc: length mismatch");
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1] > 0.0 && errors[i] > 0.0 && hs[i - 1] != hs[i]) {
      out[i] = std::log(errors[i - 1] / errors[i]) / std::log(hs[i - 1] / hs[i]);
    }
  }
  return out;
}

double fitted_order(std::span<const double> errors, std::span<const double> hs) {
  if (errors.size() != hs.size() || errors.size() < 2) {
    throw std::invalid_argument("fitted_order: need at least two matching entries");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ErrorReport measure_errors(const Discretization& disc, const OcpSolution& solution, int degree) {
  const ProblemSpec& prob = disc.problem();
  const CutGeometry& geo = disc.geometry();
  ErrorReport report;
  auto fill = [&](Quantity q, const DiscreteField& approx, const ExactField& exact,
                  bool energy) {
    report.at(q, Norm::L2) = {broken_l2_error(geo, approx, exact, degree),
                              broken_l2_norm(geo, exact, degree)};
    const double semi = broken_h1_seminorm(geo, exact, degree);
    report.at(q, Norm::H1) = {broken_h1_semi_error(geo, approx, exact, degree), semi};
    if (energy) report.at(q, Norm::Energy) = {triple_norm_error(geo, approx, exact, degree), semi};
  };
  fill(Quantity::Y, as_field(solution.y), prob.y, true);
  fill(Quantity::P, as_field(solution.p), prob.p, true);
  fill(Quantity::U, as_field(solution.control), prob.u, !prob.bounds.bounded());
  return report;
}

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::U: return "u";
    case Quantity::Y: return "y";
    case Quantity::P: return "p";
  }
  return "?";
}

std::string to_string(Norm n) {
  switch (n) {
    case Norm::L2: return "l2";
    case Norm::H1: return "h1";
    case Norm::Energy: return "energy";
  }
  return "?";
}

}  // namespace nxfem
