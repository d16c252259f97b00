#pragma once

#include <utility>
#include <vector>

#include "hjnest/fd_solver.hpp"
#include "hjnest/grid.hpp"
#include "hjnest/hamiltonian.hpp"

namespace hjnest {

/// Discrete dynamic-programming parameters. The control set discretizes the
/// Legendre velocity w = -eta'; it always contains 0 (the constant path is
/// admissible) and spans [-w_max, w_max] with w_max at least the catalog
/// velocity bound (defaults to gradient_bound + 1).
struct SlParams {
  double dt = 1e-3;
  std::vector<double> controls;  // empty -> make_controls(w_max, n_controls)
  double w_max = 0.0;            // 0 -> gradient_bound + 1
  int n_controls = 201;
  double tol = 1e-10;
  long max_iters = 0;  // 0 -> from the e^{-dt} contraction rate
  /// State constraint by exclusion of controls whose foot point leaves the
  /// domain (exact for intervals). true projects the foot point instead.
  bool project_feet = false;
  double legendre_p_max = 0.0;  // 0 -> gradient_bound
  int legendre_samples = 2001;
};

/// Symmetric control grid containing 0 exactly (n forced odd).
std::vector<double> make_controls(double w_max, int n);

/// Discrete admissible path. Sign convention: w_j is the velocity argument
/// of L, so states[j+1] = states[j] - dt * w_j.
struct Trajectory {
  std::vector<double> times;           // size N+1, uniform dt
  std::vector<double> states;          // size N+1
  std::vector<double> controls_taken;  // size N
  /// optional stash for the subgradient selections reported by
  /// check_characteristic_identity; empty until a caller attaches them
  std::vector<double> momenta;
};

/// Value iteration for the discrete DPP
///   u(x_i) = min_w { dt L(x_i, w) + e^{-dt} I[u](x_i - dt w) },
/// feet restricted to [a, b], I piecewise linear. The sweep is a sup-norm
/// contraction with factor exactly e^{-dt}; the report records the largest
/// observed increment ratio. Throws NonconvexHamiltonian.
std::pair<GridFunction, SolveReport> solve_state_constraint_sl(
    const HamiltonianSpec& spec, const Grid1D& grid, SlParams params = {});

/// Greedy descent on a converged value function: at each step the argmin
/// control of the DPP right-hand side, ties broken to the smallest |w| and
/// then the negative sign, for ceil(horizon/dt) steps.
Trajectory extract_optimal_trajectory(const HamiltonianSpec& spec,
                                      const GridFunction& u, double x0,
                                      const SlParams& params, double horizon);

/// | u(x0) - [ sum_{j dt < t} e^{-j dt} L(eta_j, w_j) dt + e^{-t} I[u](eta(t)) ] |.
/// t must align with a step multiple.
double check_dpp_identity(const HamiltonianSpec& spec, const GridFunction& u,
                          const Trajectory& traj, double t);

bool check_velocity_bound(const Trajectory& traj, double bound);

struct CharacteristicReport {
  double max_defect = 0.0;
  int steps_used = 0;
  std::vector<double> momenta;  // one per used step
};

/// Checks u(eta_j) + H(eta_j, p_j) = 0 along the trajectory with the
/// discrete momentum p_j in d_v L(eta_j, w_j) obtained from one-sided
/// difference quotients of L in v (step 1e-4). Where the two sides agree the
/// centered value is the momentum; at kinks and effective-domain edges they
/// bracket the subdifferential and p_j is the element of it that best closes
/// the identity. Steps on the boundary arc (within dt*w_max of an endpoint)
/// are excluded. Throws MomentumUndefined when no step remains.
CharacteristicReport check_characteristic_identity(const HamiltonianSpec& spec,
                                                   const GridFunction& u,
                                                   const Trajectory& traj);

}  // namespace hjnest
