#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace nxfem {

/// Pointwise box constraints u0 <= u <= u1; infinite bounds mean unconstrained.
struct ControlBounds {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool bounded() const {
    return lower != -std::numeric_limits<double>::infinity() ||
           upper != std::numeric_limits<double>::infinity();
  }
  bool contains(double u) const { return lower <= u && u <= upper; }
};

/// min{u1, max{u0, -p/nu}}; reduces to -p/nu without bounds.
inline double project_control(double p_value, double nu, const ControlBounds& bounds) {
  if (!(nu > 0.0)) throw std::invalid_argument("project_control: nu must be positive");
  return std::min(bounds.upper, std::max(bounds.lower, -p_value / nu));
}

/// Clamp of an already scaled value into the bounds.
inline double clamp_control(double u, const ControlBounds& bounds) {
  return std::min(bounds.upper, std::max(bounds.lower, u));
}

}  // namespace nxfem
