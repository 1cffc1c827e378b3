#pragma once

#include <optional>
#include <vector>

#include "nxfem/problems.hpp"

namespace nxfem {

struct PropertyOptions {
  /// Replaces every example's stabilization constant in the coercivity checks.
  std::optional<double> ctilde;
  /// Restricts the per-example checks to one example (0 = all three).
  int example = 0;
  int coercivity_n = 16;
  int cut_n = 32;
};

/// Straight interface x1 = 0.5 on the unit square with alpha = (1, 2) and a
/// state that is linear on each side, continuous, with a constant flux jump.
/// f = u = 0, so the discrete state must reproduce it exactly.
ProblemSpec make_patch_problem();

/// Runs the named structural checks of the discretization:
///   uncut P1 equivalence, cut fractions, stiffness symmetry, coercivity
///   (and, without a C override, its loss at C = 0.01), patch reproduction,
///   projection idempotence/bounds, manufactured data.
std::vector<CheckResult> run_property_suite(const PropertyOptions& options = {});

}  // namespace nxfem
