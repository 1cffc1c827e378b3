#include "nxfem/optctl.hpp"

#include <cmath>
#include <stdexcept>

namespace nxfem {

Discretization::Discretization(const ProblemSpec& problem, int n, const SolverOptions& options)
    : problem_(problem),
      options_(options),
      n_(n),
      mesh_(std::make_unique<Mesh>(build_uniform_mesh(problem.domain, n))),
      geometry_(std::make_unique<CutGeometry>(*mesh_, problem.levelset)),
      dofs_(std::make_unique<DofMap>(*geometry_)),
      cache_(std::make_unique<QuadratureCache>(*geometry_, options.quadrature_degree)),
      stiffness_(assemble_stiffness(*dofs_, problem.coeffs, problem.nitsche)),
      mass_(assemble_mass(*dofs_)),
      lifting_(*dofs_) {
  if (!(problem.nu > 0.0)) throw std::invalid_argument("Discretization: nu must be positive");
  lifting_.interpolate_boundary([this](Point x, int side) { return problem_.dirichlet(x, side); });
  state_data_ = assemble_load(*dofs_, *cache_, problem.f, problem.g, {});
  stiffness_.coupling.multiply_add(-1.0, lifting_.constrained(), state_data_);
}

SolveResult Discretization::solve(std::span<const double> rhs, double rel_tol,
                                  std::span<const double> x0) const {
  PcgOptions o;
  o.rel_tol = rel_tol;
  o.max_iter = options_.max_iter;
  o.preconditioner = options_.preconditioner;
  return pcg_solve(stiffness_.free, rhs, o, x0);
}

ImplicitControl::ImplicitControl(double nu, ControlBounds bounds) : nu_(nu), bounds_(bounds) {
  if (!(nu > 0.0)) throw std::invalid_argument("ImplicitControl: nu must be positive");
}

ImplicitControl::ImplicitControl(FeFunction costate, double nu, ControlBounds bounds)
    : costate_(std::move(costate)), nu_(nu), bounds_(bounds) {
  if (!(nu > 0.0)) throw std::invalid_argument("ImplicitControl: nu must be positive");
}

double ImplicitControl::value(int t, int side, const std::array<double, 3>& bary) const {
  if (!costate_) return clamp_control(0.0, bounds_);
  return project_control(costate_->value(t, side, bary), nu_, bounds_);
}

Point ImplicitControl::gradient(int t, int side, const std::array<double, 3>& bary) const {
  if (!costate_) return {0.0, 0.0};
  const double raw = -costate_->value(t, side, bary) / nu_;
  if (!bounds_.contains(raw)) return {0.0, 0.0};
  return (-1.0 / nu_) * costate_->gradient(t, side);
}

Vector ImplicitControl::sample(const QuadratureCache& cache) const {
  Vector out(cache.size());
  for (std::size_t i = 0; i < cache.size(); ++i) {
    const VolumePoint& q = cache.point(i);
    out[i] = value(cache.element_of(i), q.side, q.bary);
  }
  return out;
}

double quadrature_l2_norm(const QuadratureCache& cache, std::span<const double> values) {
  double s = 0.0;
  for (std::size_t i = 0; i < cache.size(); ++i) s += cache.point(i).weight * values[i] * values[i];
  return std::sqrt(s);
}

FeFunction solve_state(const Discretization& disc, std::span<const double> control,
                       const FeFunction* warm_start, double* residual) {
  Vector rhs = disc.state_data();
  if (!control.empty()) axpy(1.0, volume_moment(disc.dofs(), disc.quadrature(), control), rhs);
  std::span<const double> x0;
  if (warm_start) x0 = warm_start->free();
  SolveResult r = disc.solve(rhs, disc.options().rel_tol, x0);
  if (residual) *residual = r.relative_residual;
  FeFunction y(disc.dofs(), std::move(r.x));
  y.constrained() = disc.state_lifting().constrained();
  return y;
}

FeFunction solve_adjoint(const Discretization& disc, const FeFunction& y,
                         std::span<const double> desired_state, const FeFunction* warm_start,
                         double* residual) {
  Vector rhs = disc.mass().apply(y);
  axpy(-1.0, volume_moment(disc.dofs(), disc.quadrature(), desired_state), rhs);
  std::span<const double> x0;
  if (warm_start) x0 = warm_start->free();
  SolveResult r = disc.solve(rhs, disc.options().rel_tol, x0);
  if (residual) *residual = r.relative_residual;
  return FeFunction(disc.dofs(), std::move(r.x));
}

FeFunction solve_adjoint(const Discretization& disc, const FeFunction& y,
                         const FeFunction* warm_start, double* residual) {
  const Vector yd = disc.quadrature().sample(disc.problem().y_d);
  return solve_adjoint(disc, y, yd, warm_start, residual);
}

OcpSolution solve_unconstrained(const Discretization& disc) {
  const ProblemSpec& prob = disc.problem();
  if (prob.bounds.bounded()) {
    throw std::invalid_argument("solve_unconstrained: problem has control bounds");
  }
  const double nu = prob.nu;
  const CsrMatrix& a = disc.stiffness().free;
  const CsrMatrix& m = disc.mass().free;
  const std::size_t n = static_cast<std::size_t>(a.rows());
  const double inner_tol = disc.options().inner_tol;

  // A y + (1/nu) M p = b0,  A p - M y = c0.
  const Vector& b0 = disc.state_data();
  Vector c0(n, 0.0);
  disc.mass().coupling.multiply(disc.state_lifting().constrained(), c0);
  const Vector yd = disc.quadrature().sample(prob.y_d);
  axpy(-1.0, volume_moment(disc.dofs(), disc.quadrature(), yd), c0);

  auto inverse = [&](std::span<const double> rhs, std::span<double> out) {
    const SolveResult r = disc.solve(rhs, inner_tol);
    std::copy(r.x.begin(), r.x.end(), out.begin());
  };
  const LinearOperator reduced = [&](std::span<const double> x, std::span<double> out) {
    Vector mx = m * x;
    Vector tmp(n);
    inverse(mx, tmp);
    Vector mt = m * tmp;
    a.multiply(x, out);
    axpy(1.0 / nu, mt, out);
  };
  Vector rhs = b0;
  {
    Vector tmp(n);
    inverse(c0, tmp);
    axpy(-1.0 / nu, m * tmp, rhs);
  }
  const SolveResult outer = pcg_solve(reduced, inverse, rhs, disc.options().rel_tol,
                                      disc.options().max_iter);

  FeFunction y(disc.dofs(), outer.x);
  y.constrained() = disc.state_lifting().constrained();
  Vector prhs = m * outer.x;
  axpy(1.0, c0, prhs);
  FeFunction p(disc.dofs(), disc.solve(prhs, inner_tol).x);

  // Block residuals of the coupled system.
  Vector r1 = a * y.free();
  axpy(1.0 / nu, m * p.free(), r1);
  axpy(-1.0, b0, r1);
  Vector r2 = a * p.free();
  axpy(-1.0, m * y.free(), r2);
  axpy(-1.0, c0, r2);
  const double s1 = std::max(norm2(b0), norm2(a * y.free()));
  const double s2 = std::max(norm2(c0), norm2(a * p.free()));

  ImplicitControl control(p, nu, prob.bounds);
  OcpSolution sol{std::move(y), std::move(p), std::move(control), {}, outer.iterations, true,
                  0.0, s1 > 0.0 ? norm2(r1) / s1 : 0.0, s2 > 0.0 ? norm2(r2) / s2 : 0.0};
  sol.control_at_points = sol.control.sample(disc.quadrature());
  return sol;
}

OcpSolution solve_constrained_fixed_point(const Discretization& disc,
                                          const FixedPointOptions& options) {
  const ProblemSpec& prob = disc.problem();
  if (!(options.theta > 0.0 && options.theta <= 1.0)) {
    throw std::invalid_argument("solve_constrained_fixed_point: theta must lie in (0, 1]");
  }
  if (options.max_iter < 1) {
    throw std::invalid_argument("solve_constrained_fixed_point: max_iter must be positive");
  }
  const QuadratureCache& cache = disc.quadrature();
  Vector u = options.initial_control.value_or(Vector(cache.size(), 0.0));
  if (u.size() != cache.size()) {
    throw std::invalid_argument("solve_constrained_fixed_point: initial control has wrong size");
  }
  const Vector yd = cache.sample(prob.y_d);

  std::optional<FeFunction> y;
  std::optional<FeFunction> p;
  double state_res = 0.0;
  double adjoint_res = 0.0;
  double change = 0.0;
  int it = 0;
  bool converged = false;
  while (it < options.max_iter) {
    y = solve_state(disc, u, y ? &*y : nullptr, &state_res);
    p = solve_adjoint(disc, *y, yd, p ? &*p : nullptr, &adjoint_res);
    Vector next(cache.size());
    for (std::size_t i = 0; i < cache.size(); ++i) {
      const VolumePoint& q = cache.point(i);
      next[i] = project_control(p->value(cache.element_of(i), q.side, q.bary), prob.nu,
                                prob.bounds);
      if (options.theta < 1.0) next[i] = (1.0 - options.theta) * u[i] + options.theta * next[i];
    }
    Vector diff = next;
    axpy(-1.0, u, diff);
    change = quadrature_l2_norm(cache, diff);
    u = std::move(next);
    ++it;
    if (change < options.tol) {
      converged = true;
      break;
    }
  }

  ImplicitControl control(*p, prob.nu, prob.bounds);
  return {std::move(*y), std::move(*p), std::move(control), std::move(u), it, converged,
          change, state_res, adjoint_res};
}

OcpSolution solve_optimal_control(const Discretization& disc, const FixedPointOptions& options) {
  if (disc.problem().bounds.bounded()) return solve_constrained_fixed_point(disc, options);
  return solve_unconstrained(disc);
}

}  // namespace nxfem
