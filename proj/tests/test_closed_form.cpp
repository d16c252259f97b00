#include <cmath>

#include "doctest.h"
#include "hjnest/closed_form.hpp"
#include "hjnest/fd_solver.hpp"

using namespace hjnest;

namespace {

std::vector<OracleId> all_oracles() {
  return {OracleId::capped_cone(1.0, 1.0),
          OracleId::holder_cone(0.5),
          OracleId::shifted_eikonal(),
          OracleId::control_eikonal(),
          OracleId::potential_double_well(),
          OracleId::scaled_double_well(2.0),
          OracleId::p2_shifted_eikonal()};
}

int min_k(const OracleId& id) {
  return id.tag == OracleTag::P2ShiftedEikonal ? 2 : 1;
}

}  // namespace

TEST_CASE("closed-form point values") {
  for (int k : {1, 3, 7})
    CHECK(oracle_solution(OracleId::shifted_eikonal(), k, k) ==
          doctest::Approx(1.0).epsilon(1e-15));
  CHECK(oracle_solution(OracleId::capped_cone(1.0, 1.0), 2, 0.0) ==
        doctest::Approx(0.1353352832366127).epsilon(1e-14));
  CHECK(oracle_solution(OracleId::holder_cone(0.5), 3, 0.0) ==
        doctest::Approx(0.25).epsilon(1e-14));
  CHECK(oracle_solution(OracleId::control_eikonal(), 1, 0.0) ==
        doctest::Approx(0.5676676416183064).epsilon(1e-14));
  CHECK_THROWS_AS(oracle_solution(OracleId::shifted_eikonal(), 2, 2.5),
                  OutsideDomain);
}

TEST_CASE("limit values") {
  CHECK(oracle_limit(OracleId::control_eikonal(), 0.0) == 0.5);
  CHECK(oracle_limit(OracleId::capped_cone(1.0, 1.0), 1.7) == 0.0);
  CHECK(oracle_limit(OracleId::p2_shifted_eikonal(), 0.0) ==
        doctest::Approx(0.3678794411714423).epsilon(1e-14));
  CHECK_THROWS_AS(oracle_limit(OracleId::p2_shifted_eikonal(), 1.5),
                  OutsideDomain);
  CHECK(oracle_limit_is_unique(OracleId::control_eikonal()));
  CHECK_FALSE(oracle_limit_is_unique(OracleId::scaled_double_well(2.0)));
}

TEST_CASE("exact errors") {
  CHECK(exact_error(OracleId::control_eikonal(), 2, 1.0, 401) ==
        doctest::Approx(0.024893534183931972).epsilon(1e-12));
  // max of e^{x-1}(e^{1/k}-1) over |x| <= 1/2 sits at x = 1/2
  CHECK(exact_error(OracleId::p2_shifted_eikonal(), 2, 0.5, 401) ==
        doctest::Approx(0.3934693402873666).epsilon(1e-12));
  CHECK(exact_error(OracleId::capped_cone(1.0, 1.0), 5, 0.0) ==
        doctest::Approx(0.006737946999085467).epsilon(1e-14));
  CHECK_THROWS_AS(exact_error(OracleId::shifted_eikonal(), 2, 3.0, 11),
                  OutsideDomain);
}

TEST_CASE("errors are nonnegative and decay in k") {
  for (const auto& id : all_oracles()) {
    const int k0 = min_k(id);
    const double r =
        id.tag == OracleTag::P2ShiftedEikonal ? 0.4 : 0.8;
    double prev = -1.0;
    for (int k = k0; k < k0 + 6; ++k) {
      // pointwise nonnegativity on samples
      for (int i = 0; i <= 20; ++i) {
        const double x = -r + 2.0 * r * i / 20.0;
        CHECK(oracle_solution(id, k, x) - oracle_limit(id, x) >= -1e-13);
      }
      const double e = exact_error(id, k, r, 201);
      if (prev >= 0.0) CHECK(e < prev);
      prev = e;
    }
  }
}

TEST_CASE("exact rate identities") {
  // control family: consecutive errors at the origin shrink by e^{-2}
  const OracleId ce = OracleId::control_eikonal();
  for (int k = 1; k < 6; ++k) {
    const double ratio = exact_error(ce, k + 1, 0.0) / exact_error(ce, k, 0.0);
    CHECK(std::abs(ratio - std::exp(-2.0)) <= 1e-12);
  }
  // scaled well: errors proportional to (1+k)^{1-m}
  for (double m : {2.0, 3.0}) {
    const OracleId sw = OracleId::scaled_double_well(m);
    const double c0 =
        exact_error(sw, 2, 0.0) * std::pow(1.0 + 2.0, m - 1.0);
    for (int k = 3; k < 9; ++k) {
      const double c = exact_error(sw, k, 0.0) * std::pow(1.0 + k, m - 1.0);
      CHECK(std::abs(c - c0) <= 1e-12 * c0);
    }
  }
}

TEST_CASE("sampled closed forms nearly annihilate the discrete operator") {
  // interior stencil residual away from the |x| kink at 0 and the endpoints
  for (const auto& id : all_oracles()) {
    CAPTURE(static_cast<int>(id.tag));
    const int k = std::max(min_k(id), 2);
    const HamiltonianSpec spec = oracle_hamiltonian(id);
    const Interval dom = build_domain(oracle_prototype(id), k);
    const Grid1D grid = build_grid_with_spacing(dom.a, dom.b, 1e-3);
    GridFunction u{grid, {}};
    u.values.resize(grid.n);
    for (int i = 0; i < grid.n; ++i)
      u.values[i] = oracle_solution(id, k, grid.node(i));
    const double theta = fd_default_theta(spec, grid);
    double worst = 0.0;
    for (int i = 1; i + 1 < grid.n; ++i) {
      const double x = grid.node(i);
      if (std::abs(x) <= 2.0 * grid.h) continue;  // kink of |x| profiles
      const double pm = (u.values[i] - u.values[i - 1]) / grid.h;
      const double pp = (u.values[i + 1] - u.values[i]) / grid.h;
      worst = std::max(
          worst, std::abs(u.values[i] +
                          lf_numerical_hamiltonian(spec, x, pm, pp, theta)));
    }
    CHECK(worst <= 5.0 * theta * grid.h);
  }
}
