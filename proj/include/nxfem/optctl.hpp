#pragma once

#include <memory>
#include <optional>
#include <span>

#include "nxfem/assembly.hpp"
#include "nxfem/control.hpp"
#include "nxfem/geometry.hpp"
#include "nxfem/linalg.hpp"
#include "nxfem/mesh.hpp"
#include "nxfem/problems.hpp"
#include "nxfem/space.hpp"

namespace nxfem {

struct SolverOptions {
  /// Relative residual for state and adjoint solves.
  double rel_tol = 1e-12;
  /// Relative residual for the inner solves of the reduced unconstrained system.
  double inner_tol = 1e-13;
  int max_iter = 50000;
  Preconditioner preconditioner = Preconditioner::Jacobi;
  /// Volume quadrature degree for data and control terms.
  int quadrature_degree = 4;
};

/// Everything that depends only on the problem and the mesh: geometry, dof
/// map, matrices and the control-independent load terms.
class Discretization {
public:
  Discretization(const ProblemSpec& problem, int n, const SolverOptions& options = {});

  Discretization(const Discretization&) = delete;
  Discretization& operator=(const Discretization&) = delete;

  const ProblemSpec& problem() const { return problem_; }
  const SolverOptions& options() const { return options_; }
  const Mesh& mesh() const { return *mesh_; }
  const CutGeometry& geometry() const { return *geometry_; }
  const DofMap& dofs() const { return *dofs_; }
  const QuadratureCache& quadrature() const { return *cache_; }
  const SystemMatrix& stiffness() const { return stiffness_; }
  const SystemMatrix& mass() const { return mass_; }
  int n() const { return n_; }

  /// Load of f and g minus A_fc y_D: state right-hand side without control.
  const Vector& state_data() const { return state_data_; }
  /// Zero function carrying the Dirichlet values of the state.
  const FeFunction& state_lifting() const { return lifting_; }

  /// Solves with the stiffness matrix; throws on non-convergence.
  SolveResult solve(std::span<const double> rhs, double rel_tol,
                    std::span<const double> x0 = {}) const;

private:
  ProblemSpec problem_;
  SolverOptions options_;
  int n_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<CutGeometry> geometry_;
  std::unique_ptr<DofMap> dofs_;
  std::unique_ptr<QuadratureCache> cache_;
  SystemMatrix stiffness_;
  SystemMatrix mass_;
  Vector state_data_;
  FeFunction lifting_;
};

/// Control defined implicitly by the discrete co-state,
/// u_h = min{u1, max{u0, -p_h / nu}}. Without a co-state it is u = 0.
class ImplicitControl {
public:
  ImplicitControl(double nu, ControlBounds bounds);
  ImplicitControl(FeFunction costate, double nu, ControlBounds bounds);

  double nu() const { return nu_; }
  const ControlBounds& bounds() const { return bounds_; }
  const std::optional<FeFunction>& costate() const { return costate_; }

  double value(int t, int side, const std::array<double, 3>& bary) const;
  /// Gradient away from the switching curve: -grad p_h / nu where the
  /// bounds are inactive, zero where one is attained.
  Point gradient(int t, int side, const std::array<double, 3>& bary) const;
  /// Values at every point of a quadrature cache.
  Vector sample(const QuadratureCache& cache) const;

private:
  std::optional<FeFunction> costate_;
  double nu_;
  ControlBounds bounds_;
};

struct OcpSolution {
  FeFunction y;
  FeFunction p;
  ImplicitControl control;
  Vector control_at_points;  // last control iterate at the volume quadrature points
  int iterations = 0;
  bool converged = false;
  double control_change = 0.0;
  double state_residual = 0.0;    // relative algebraic residuals of the final solves
  double adjoint_residual = 0.0;
};

/// Discrete L2 norm of a field sampled at the quadrature points.
double quadrature_l2_norm(const QuadratureCache& cache, std::span<const double> values);

/// a_h(y_h, v) = (u + f, v) + interface terms of g, with the control given at
/// the quadrature points (empty means u = 0).
FeFunction solve_state(const Discretization& disc, std::span<const double> control,
                       const FeFunction* warm_start = nullptr, double* residual = nullptr);

/// a_h(v, p_h) = (y_h - y_d, v). The second overload takes y_d sampled at the
/// quadrature points instead of the problem's y_d.
FeFunction solve_adjoint(const Discretization& disc, const FeFunction& y,
                         const FeFunction* warm_start = nullptr, double* residual = nullptr);
FeFunction solve_adjoint(const Discretization& disc, const FeFunction& y,
                         std::span<const double> desired_state,
                         const FeFunction* warm_start = nullptr, double* residual = nullptr);

/// Coupled linear system for U_ad = L2 (u_h = -p_h / nu), solved by CG on
/// the reduced operator A + (1/nu) M A^-1 M with A^-1 as preconditioner.
OcpSolution solve_unconstrained(const Discretization& disc);

struct FixedPointOptions {
  double tol = 1e-10;
  int max_iter = 100;
  double theta = 1.0;  // 1 is the plain iteration; < 1 blends with the previous control
  std::optional<Vector> initial_control;  // at the quadrature points; default u = 0
};

/// Projection fixed-point iteration: state solve, adjoint solve, then
/// u <- P(-p_h / nu), stopped when the discrete L2 change of u drops below
/// tol or after max_iter sweeps. Non-convergence is reported, not thrown.
OcpSolution solve_constrained_fixed_point(const Discretization& disc,
                                          const FixedPointOptions& options = {});

/// Picks solve_unconstrained or the fixed point based on the problem bounds.
OcpSolution solve_optimal_control(const Discretization& disc,
                                  const FixedPointOptions& options = {});

}  // namespace nxfem
