#pragma once

#include <utility>

#include "hjnest/grid.hpp"
#include "hjnest/hamiltonian.hpp"

namespace hjnest {

/// Damped-Jacobi fixed-point parameters for the Lax-Friedrichs scheme.
/// Defaults marked 0 are filled per grid: theta from
/// lipschitz_bound_on_domain, tau = h/(h + 2 theta) (the largest step keeping
/// the update monotone), max_iters = 10 n (1 + theta/h).
struct FdParams {
  double theta = 0.0;
  double tau = 0.0;
  double tol = 1e-10;
  long max_iters = 0;
};

struct SolveReport {
  long iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  double wall_ms = 0.0;
  /// max over recorded iterations of ||u^{n+1}-u^n|| / ||u^n-u^{n-1}||;
  /// NaN when fewer than two increments were recorded. Filled by the SL
  /// solver, whose sweep is an exact e^{-dt} contraction.
  double max_contraction_ratio = 0.0;
};

/// Ĥ(x, p-, p+) = H(x, (p- + p+)/2) - (theta/2)(p+ - p-).
/// Monotone (nondecreasing in p-, nonincreasing in p+) whenever theta
/// dominates |dH/dp|, and consistent: Ĥ(x,p,p) = H(x,p).
double lf_numerical_hamiltonian(const HamiltonianSpec& spec, double x,
                                double p_minus, double p_plus, double theta);

/// Solves u + H(x, Du) = 0 with the state constraint on [a, b]:
///   interior   u_i = -Ĥ(x_i, D-u_i, D+u_i)
///   boundary   u_{n-1} = -min_{q in [D-u_{n-1}, Q]} H(x_{n-1}, q)
///              u_0     = -min_{q in [-Q, D+u_0]}   H(x_0, q),  Q = gradient_bound
/// The boundary rows enforce the supersolution inequality against every
/// inward-pointing test slope; taking only the endpoint slope would leave
/// u = 0 a spurious fixed point for every entry with H(x,0) = 0.
///
/// Iteration u <- u + tau (T(u) - u) from u0 = max_i(-H(x_i, 0)), stopping at
/// sup|T(u) - u| <= tol. Non-convergence is reported via the flag (residual
/// in the report); iterates exceeding 10 value_bound throw NonCoercive.
std::pair<GridFunction, SolveReport> solve_state_constraint_fd(
    const HamiltonianSpec& spec, const Grid1D& grid, FdParams params = {});

/// sup_i |u_i + Ĥ_i(u)| with the same interior/boundary stencils as the
/// solver. theta = 0 picks the solver default.
double fd_residual(const HamiltonianSpec& spec, const GridFunction& u,
                   double theta = 0.0);

double fd_default_theta(const HamiltonianSpec& spec, const Grid1D& grid);

}  // namespace hjnest
