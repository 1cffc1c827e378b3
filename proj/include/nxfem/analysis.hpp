#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nxfem/geometry.hpp"
#include "nxfem/optctl.hpp"
#include "nxfem/problems.hpp"
#include "nxfem/space.hpp"

namespace nxfem {

/// Side-aware evaluator of an approximation on element t.
struct DiscreteField {
  std::function<double(int t, int side, const std::array<double, 3>& bary)> value;
  std::function<Point(int t, int side, const std::array<double, 3>& bary)> gradient;
};

DiscreteField as_field(const FeFunction& fun);
DiscreteField as_field(const ImplicitControl& control);
/// The exact field itself, sampled through the element geometry.
DiscreteField as_field(const ExactField& exact, const Mesh& mesh);
// The fields are captured by reference.
DiscreteField as_field(FeFunction&&) = delete;
DiscreteField as_field(ImplicitControl&&) = delete;
DiscreteField as_field(ExactField&&, const Mesh&) = delete;

/// sqrt(sum over element sides of int (approx - exact)^2).
double broken_l2_error(const CutGeometry& geo, const DiscreteField& approx,
                       const ExactField& exact, int degree = 4);
/// sqrt(sum over element sides of int |grad(approx - exact)|^2).
double broken_h1_semi_error(const CutGeometry& geo, const DiscreteField& approx,
                            const ExactField& exact, int degree = 4);
/// Mesh-dependent norm of the error:
///   |grad e|^2 + sum_T h_T ||{d_n e}||^2_{Gamma_T} + sum_T h_T^-1 ||[e]||^2_{Gamma_T}
/// with {q} = k1 q1 + k2 q2 and the segment normal of Gamma_{T,h}.
double triple_norm_error(const CutGeometry& geo, const DiscreteField& approx,
                         const ExactField& exact, int degree = 4);

double broken_l2_norm(const CutGeometry& geo, const ExactField& exact, int degree = 4);
double broken_h1_seminorm(const CutGeometry& geo, const ExactField& exact, int degree = 4);

/// order_i = log(e_{i-1} / e_i) / log(h_{i-1} / h_i); the first entry, and any
/// entry involving a non-positive error, is empty.
std::vector<std::optional<double>> eoc(std::span<const double> errors,
                                       std::span<const double> hs);

/// Least-squares slope of log(error) against log(h).
double fitted_order(std::span<const double> errors, std::span<const double> hs);

enum class Quantity { U, Y, P };
enum class Norm { L2, H1, Energy };

struct ErrorMeasure {
  double absolute = 0.0;
  double reference = 0.0;  // norm of the exact field, same quadrature
  double relative() const { return reference > 0.0 ? absolute / reference : absolute; }
};

/// Errors of one discrete solution against the exact triple. The energy norm
/// of the control is only measured when it is unconstrained.
struct ErrorReport {
  std::array<std::array<ErrorMeasure, 3>, 3> values{};  // [quantity][norm]
  const ErrorMeasure& at(Quantity q, Norm n) const {
    return values[static_cast<std::size_t>(q)][static_cast<std::size_t>(n)];
  }
  ErrorMeasure& at(Quantity q, Norm n) {
    return values[static_cast<std::size_t>(q)][static_cast<std::size_t>(n)];
  }
};

ErrorReport measure_errors(const Discretization& disc, const OcpSolution& solution,
                           int degree = 4);

std::string to_string(Quantity q);
std::string to_string(Norm n);

}  // namespace nxfem
