#include <cmath>

#include "doctest.h"
#include "hjnest/closed_form.hpp"
#include "hjnest/fd_solver.hpp"

using namespace hjnest;

TEST_CASE("lax-friedrichs numerical hamiltonian") {
  const auto pe = HamiltonianSpec::pure_eikonal();
  const auto se = HamiltonianSpec::shifted_eikonal();
  // consistency: equal one-sided slopes reproduce H exactly
  for (double p : {-1.3, 0.0, 0.4, 2.0}) {
    CHECK(lf_numerical_hamiltonian(pe, 0.0, p, p, 1.0) ==
          eval_hamiltonian(pe, 0.0, p));
    CHECK(lf_numerical_hamiltonian(se, 0.2, p, p, 1.0) ==
          eval_hamiltonian(se, 0.2, p));
  }
  CHECK(lf_numerical_hamiltonian(pe, 0.0, 1.0, -1.0, 1.0) ==
        doctest::Approx(1.0));
  CHECK(lf_numerical_hamiltonian(se, 0.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(-1.0));
}

TEST_CASE("pure eikonal collapses to zero immediately") {
  const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 1e-2);
  const auto [u, rep] =
      solve_state_constraint_fd(HamiltonianSpec::pure_eikonal(), grid, {});
  CHECK(rep.converged);
  CHECK(rep.final_residual == 0.0);
  CHECK(rep.iterations == 1);
  for (double v : u.values) CHECK(v == 0.0);
}

TEST_CASE("shifted eikonal matches e^{x-k} on [-2,2]") {
  const OracleId id = OracleId::shifted_eikonal();
  const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 1e-3);
  const auto [u, rep] =
      solve_state_constraint_fd(HamiltonianSpec::shifted_eikonal(), grid, {});
  REQUIRE(rep.converged);
  const double err = sup_error_on_region(
      u, [&](double x) { return oracle_solution(id, 2, x); }, 1.5);
  CHECK(err <= 5e-3);
  // the solver residual contract
  CHECK(fd_residual(HamiltonianSpec::shifted_eikonal(), u) <= 1e-10 + 1e-14);
}

TEST_CASE("capped cone matches alpha beta e^{(|x|-k)/alpha} on [-2,2]") {
  const OracleId id = OracleId::capped_cone(1.0, 1.0);
  const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 1e-3);
  const auto [u, rep] = solve_state_constraint_fd(
      HamiltonianSpec::capped_cone(1.0, 1.0), grid, {});
  REQUIRE(rep.converged);
  const double err = sup_error_on_region(
      u, [&](double x) { return oracle_solution(id, 2, x); }, 1.5);
  CHECK(err <= 5e-3);
}

TEST_CASE("residual of sampled closed forms is first-order small") {
  // smooth solution: the discrete operator applied to the exact e^{x-k}
  const auto se = HamiltonianSpec::shifted_eikonal();
  const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 1e-3);
  GridFunction exact{grid, {}};
  exact.values.resize(grid.n);
  for (int i = 0; i < grid.n; ++i)
    exact.values[i] = std::exp(grid.node(i) - 2.0);
  CHECK(fd_residual(se, exact) <= 5.0 * grid.h);

  // zero function with the plain eikonal
  GridFunction zero{grid, std::vector<double>(grid.n, 0.0)};
  CHECK(fd_residual(HamiltonianSpec::pure_eikonal(), zero) == 0.0);
}

TEST_CASE("a-priori bounds on solver output") {
  for (const auto& spec :
       {HamiltonianSpec::capped_cone(1.0, 1.0),
        HamiltonianSpec::shifted_eikonal(),
        HamiltonianSpec::control_eikonal(),
        HamiltonianSpec::potential_double_well()}) {
    CAPTURE(spec.name());
    const Grid1D grid = build_grid_with_spacing(-2.0, 2.0, 2e-3);
    const auto [u, rep] = solve_state_constraint_fd(spec, grid, {});
    REQUIRE(rep.converged);
    double sup_u = 0.0, sup_slope = 0.0;
    for (int i = 0; i < grid.n; ++i) {
      sup_u = std::max(sup_u, std::abs(u.values[i]));
      if (i > 0)
        sup_slope = std::max(
            sup_slope, std::abs(u.values[i] - u.values[i - 1]) / grid.h);
    }
    CHECK(sup_u <= spec.value_bound + 1e-10);
    CHECK(sup_slope <= spec.gradient_bound + 10.0 * grid.h);
  }
}

TEST_CASE("solutions order downward in k on the common region") {
  const auto se = HamiltonianSpec::shifted_eikonal();
  const Grid1D g1 = build_grid_with_spacing(-1.0, 1.0, 1e-3);
  const Grid1D g2 = build_grid_with_spacing(-2.0, 2.0, 1e-3);
  const auto [u1, r1] = solve_state_constraint_fd(se, g1, {});
  const auto [u2, r2] = solve_state_constraint_fd(se, g2, {});
  REQUIRE(r1.converged);
  REQUIRE(r2.converged);
  const double tol = g1.h + g2.h;
  for (int i = 0; i < g1.n; ++i) {
    const double x = g1.node(i);
    if (std::abs(x) > 0.999) continue;
    CHECK(u2.interpolate(x) <= u1.values[i] + tol);
  }
}

TEST_CASE("halving h reduces the oracle error") {
  const OracleId id = OracleId::capped_cone(1.0, 1.0);
  const auto spec = HamiltonianSpec::capped_cone(1.0, 1.0);
  double prev = -1.0;
  for (double h : {4e-3, 2e-3, 1e-3}) {
    const Grid1D grid = build_grid_with_spacing(-1.0, 1.0, h);
    const auto [u, rep] = solve_state_constraint_fd(spec, grid, {});
    REQUIRE(rep.converged);
    const double err = sup_error_on_region(
        u, [&](double x) { return oracle_solution(id, 1, x); }, 0.75);
    if (prev >= 0.0) CHECK(err <= 0.75 * prev);
    prev = err;
  }
}

TEST_CASE("runaway iterates are reported as non-coercive") {
  // a doctored value bound makes the ordinary growth toward the solution
  // cross the blow-up guard
  HamiltonianSpec spec = HamiltonianSpec::shifted_eikonal();
  spec.value_bound = 1e-6;
  const Grid1D grid = build_grid_with_spacing(-1.0, 1.0, 1e-2);
  CHECK_THROWS_AS(solve_state_constraint_fd(spec, grid, {}), NonCoercive);
}

TEST_CASE("parameter validation") {
  const Grid1D grid = build_grid(-1.0, 1.0, 11);
  FdParams params;
  params.tau = 0.9;  // far above h/(h+2 theta)
  CHECK_THROWS_AS(solve_state_constraint_fd(HamiltonianSpec::pure_eikonal(),
                                            grid, params),
                  std::invalid_argument);
  FdParams bad_tol;
  bad_tol.tol = 1e-16;
  CHECK_THROWS_AS(solve_state_constraint_fd(HamiltonianSpec::pure_eikonal(),
                                            grid, bad_tol),
                  std::invalid_argument);
}
