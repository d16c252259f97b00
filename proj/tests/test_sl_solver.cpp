#include <cmath>

#include "doctest.h"
#include "hjnest/closed_form.hpp"
#include "hjnest/sl_solver.hpp"

using namespace hjnest;

namespace {

SlParams control_params(double dt = 1e-3) {
  SlParams p;
  p.dt = dt;
  p.w_max = 1.0;
  p.n_controls = 201;
  return p;
}

// the heavy k=1 control solve, shared across cases
const std::pair<GridFunction, SolveReport>& control_solution() {
  static const auto sol = [] {
    const Grid1D grid = build_grid_with_spacing(-1.0, 1.0, 1e-3);
    return solve_state_constraint_sl(HamiltonianSpec::control_eikonal(), grid,
                                     control_params());
  }();
  return sol;
}

}  // namespace

TEST_CASE("control grids are symmetric and contain zero") {
  const auto w = make_controls(1.0, 201);
  REQUIRE(w.size() == 201);
  CHECK(w.front() == -1.0);
  CHECK(w.back() == 1.0);
  CHECK(w[100] == 0.0);
  for (size_t i = 0; i + 1 < w.size(); ++i) CHECK(w[i] < w[i + 1]);
}

TEST_CASE("pure eikonal value iteration returns zero") {
  const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 5e-3);
  SlParams p;
  p.dt = 5e-3;
  const auto [u, rep] =
      solve_state_constraint_sl(HamiltonianSpec::pure_eikonal(), grid, p);
  CHECK(rep.converged);
  for (double v : u.values) CHECK(std::abs(v) <= 1e-12);
}

TEST_CASE("nonconvex entries are rejected") {
  const Grid1D grid = build_grid(-1.0, 1.0, 11);
  CHECK_THROWS_AS(solve_state_constraint_sl(
                      HamiltonianSpec::capped_cone(1.0, 1.0), grid, {}),
                  NonconvexHamiltonian);
}

TEST_CASE("control eikonal value function matches the closed form") {
  const OracleId id = OracleId::control_eikonal();
  const auto& [u, rep] = control_solution();
  REQUIRE(rep.converged);
  const double err = sup_error_on_region(
      u, [&](double x) { return oracle_solution(id, 1, x); }, 0.9);
  CHECK(err <= 1e-2);
  // lower bound: nothing dips below -value_bound
  for (double v : u.values) CHECK(v >= -1.0 - 1e-10);
  // recorded sweeps contract at least as fast as e^{-dt}
  CHECK(rep.max_contraction_ratio <= std::exp(-1e-3) + 1e-6);
}

TEST_CASE("large-k solve approximates the unconstrained limit") {
  const OracleId id = OracleId::control_eikonal();
  const Grid1D grid = build_grid_with_spacing(-8.0, 8.0, 2e-3);
  SlParams p;
  p.dt = 2e-3;
  p.w_max = 1.0;
  p.n_controls = 41;
  const auto [u, rep] =
      solve_state_constraint_sl(HamiltonianSpec::control_eikonal(), grid, p);
  REQUIRE(rep.converged);
  const double err = sup_error_on_region(
      u, [&](double x) { return oracle_limit(id, x); }, 1.0);
  CHECK(err <= 1e-2);
}

TEST_CASE("optimal trajectories run to the boundary and rest") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const auto& [u, rep] = control_solution();
  const SlParams params = control_params();

  SUBCASE("from +0.5, toward +1 at unit speed") {
    const Trajectory traj =
        extract_optimal_trajectory(spec, u, 0.5, params, 2.0);
    REQUIRE(traj.controls_taken.size() == 2000);
    // moving phase: w = -1 (the path moves right at speed 1)
    for (int j = 0; j < 400; ++j)
      CHECK(traj.controls_taken[j] == doctest::Approx(-1.0));
    CHECK(traj.states[400] == doctest::Approx(0.9).epsilon(1e-6));
    // after reaching the boundary the control is 0 forever
    size_t first_zero = traj.controls_taken.size();
    for (size_t j = 0; j < traj.controls_taken.size(); ++j)
      if (traj.controls_taken[j] == 0.0) {
        first_zero = j;
        break;
      }
    REQUIRE(first_zero < traj.controls_taken.size());
    CHECK(std::abs(traj.states[first_zero] - 1.0) <= 2e-3);
    CHECK(std::abs(first_zero * params.dt - 0.5) <= 0.05);
    for (size_t j = first_zero; j < traj.controls_taken.size(); ++j)
      CHECK(traj.controls_taken[j] == 0.0);
  }

  SUBCASE("from -0.25, mirror run reaching -1 near t = 0.75") {
    const Trajectory traj =
        extract_optimal_trajectory(spec, u, -0.25, params, 2.0);
    size_t first_zero = traj.controls_taken.size();
    for (size_t j = 0; j < traj.controls_taken.size(); ++j)
      if (traj.controls_taken[j] == 0.0) {
        first_zero = j;
        break;
      }
    REQUIRE(first_zero < traj.controls_taken.size());
    CHECK(std::abs(traj.states[first_zero] + 1.0) <= 2e-3);
    CHECK(std::abs(first_zero * params.dt - 0.75) <= 0.05);
  }
}

TEST_CASE("constant trajectory for the pure eikonal") {
  const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 5e-3);
  SlParams p;
  p.dt = 5e-3;
  const auto [u, rep] =
      solve_state_constraint_sl(HamiltonianSpec::pure_eikonal(), grid, p);
  const Trajectory traj = extract_optimal_trajectory(
      HamiltonianSpec::pure_eikonal(), u, 0.7, p, 1.0);
  for (double w : traj.controls_taken) CHECK(w == 0.0);
  for (double x : traj.states) CHECK(x == doctest::Approx(0.7));
  // every term of the dpp identity vanishes
  CHECK(check_dpp_identity(HamiltonianSpec::pure_eikonal(), u, traj, 0.5) <=
        1e-12);
  // momentum 0 closes the hamiltonian identity exactly
  const auto crep =
      check_characteristic_identity(HamiltonianSpec::pure_eikonal(), u, traj);
  CHECK(crep.max_defect <= 1e-9);
}

TEST_CASE("dpp identity along optimal paths") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const auto& [u, rep] = control_solution();
  const Trajectory traj =
      extract_optimal_trajectory(spec, u, 0.5, control_params(), 2.0);
  CHECK(check_dpp_identity(spec, u, traj, 0.0) == 0.0);
  CHECK(check_dpp_identity(spec, u, traj, 0.25) <= 5e-3);
  CHECK(check_dpp_identity(spec, u, traj, 0.5) <= 5e-3);
  CHECK_THROWS_AS(check_dpp_identity(spec, u, traj, 0.2503),
                  std::invalid_argument);
}

TEST_CASE("velocity bound check") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const auto& [u, rep] = control_solution();
  const Trajectory traj =
      extract_optimal_trajectory(spec, u, 0.5, control_params(), 1.0);
  CHECK(check_velocity_bound(traj, 1.0));
  CHECK_FALSE(check_velocity_bound(traj, -1.0));
  Trajectory constant;
  constant.times = {0.0, 1.0};
  constant.states = {0.0, 0.0};
  constant.controls_taken = {0.0};
  CHECK(check_velocity_bound(constant, 0.0));
}

TEST_CASE("characteristic identity on the pre-boundary segment") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const auto& [u, rep] = control_solution();
  const Trajectory traj =
      extract_optimal_trajectory(spec, u, 0.5, control_params(), 2.0);
  const auto crep = check_characteristic_identity(spec, u, traj);
  CHECK(crep.max_defect <= 2e-2);
  CHECK(crep.steps_used >= 1);
  // the boundary arc is excluded: used steps stop at the moving phase
  CHECK(crep.steps_used <= 510);
  // recorded momenta are subgradient selections: here nonpositive (the
  // value function decreases along increasing x on this segment)
  for (double p : crep.momenta) CHECK(p <= 1e-9);
}

TEST_CASE("trajectory bookkeeping and degenerate starts") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const auto& [u, rep] = control_solution();
  const SlParams params = control_params();
  const Trajectory traj =
      extract_optimal_trajectory(spec, u, 0.25, params, 1.0);
  REQUIRE(traj.states.size() == traj.times.size());
  REQUIRE(traj.controls_taken.size() + 1 == traj.states.size());
  // states follow x - dt w until the boundary clamp engages
  for (size_t j = 0; j < 300; ++j)
    CHECK(traj.states[j + 1] ==
          doctest::Approx(traj.states[j] - params.dt * traj.controls_taken[j])
              .epsilon(1e-12));

  CHECK_THROWS_AS(extract_optimal_trajectory(spec, u, 4.0, params, 1.0),
                  OutsideDomain);

  // a path resting on the boundary carries no interior momentum
  const Trajectory parked =
      extract_optimal_trajectory(spec, u, 1.0, params, 0.5);
  CHECK_THROWS_AS(check_characteristic_identity(spec, u, parked),
                  MomentumUndefined);
}

TEST_CASE("sl and fd agree on the convex entries") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const Grid1D grid = build_grid_with_spacing(-1.0, 1.0, 2e-3);
  SlParams sp;
  sp.dt = 2e-3;
  sp.w_max = 1.0;
  sp.n_controls = 201;
  const auto [usl, rsl] = solve_state_constraint_sl(spec, grid, sp);
  const auto [ufd, rfd] = solve_state_constraint_fd(spec, grid, {});
  REQUIRE(rsl.converged);
  REQUIRE(rfd.converged);
  double worst = 0.0;
  for (int i = 0; i < grid.n; ++i)
    worst = std::max(worst, std::abs(usl.values[i] - ufd.values[i]));
  CHECK(worst <= 2.0 * (grid.h + sp.dt) * std::max(1.0, spec.lipschitz_p));
}

TEST_CASE("foot projection fallback stays close to the exclusion scheme") {
  const auto spec = HamiltonianSpec::control_eikonal();
  const OracleId id = OracleId::control_eikonal();
  const Grid1D grid = build_grid_with_spacing(-1.0, 1.0, 2e-3);
  SlParams p;
  p.dt = 2e-3;
  p.w_max = 1.0;
  p.n_controls = 101;
  p.project_feet = true;
  const auto [u, rep] = solve_state_constraint_sl(spec, grid, p);
  REQUIRE(rep.converged);
  const double err = sup_error_on_region(
      u, [&](double x) { return oracle_solution(id, 1, x); }, 0.9);
  CHECK(err <= 2e-2);
}

TEST_CASE("domain monotonicity in k for the control family") {
  const auto spec = HamiltonianSpec::control_eikonal();
  SlParams p;
  p.dt = 2e-3;
  p.w_max = 1.0;
  p.n_controls = 101;
  const Grid1D g1 = build_grid_with_spacing(-1.0, 1.0, 2e-3);
  const Grid1D g2 = build_grid_with_spacing(-2.0, 2.0, 2e-3);
  const auto [u1, r1] = solve_state_constraint_sl(spec, g1, p);
  const auto [u2, r2] = solve_state_constraint_sl(spec, g2, p);
  const double tol = 2.0 * (2e-3 + p.dt);
  const OracleId id = OracleId::control_eikonal();
  for (int i = 0; i < g1.n; ++i) {
    const double x = g1.node(i);
    if (std::abs(x) > 0.9) continue;
    CHECK(u2.interpolate(x) <= u1.values[i] + tol);
    CHECK(oracle_limit(id, x) <= u2.interpolate(x) + tol);
  }
}
