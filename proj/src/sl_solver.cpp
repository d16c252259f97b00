#include "hjnest/sl_solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace hjnest {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LegendreEval {
  const HamiltonianSpec& spec;
  double p_max;
  int samples;
  double operator()(double x, double v) const {
    return legendre_transform(spec, x, v, p_max, samples);
  }
};

bool x_independent(const HamiltonianSpec& spec) {
  switch (spec.id) {
    case HamiltonianId::ScaledDoubleWell:
    case HamiltonianId::PotentialDoubleWell:
    case HamiltonianId::ControlEikonal:
      return false;
    default:
      return true;
  }
}

SlParams fill_defaults(const HamiltonianSpec& spec, SlParams params) {
  if (!spec.is_convex_in_p)
    throw NonconvexHamiltonian("sl solver: " + spec.name() +
                               " is not convex in p");
  if (!(params.dt > 0.0)) throw std::invalid_argument("sl dt must be > 0");
  if (params.w_max <= 0.0) params.w_max = spec.gradient_bound + 1.0;
  if (params.controls.empty()) {
    params.controls = make_controls(params.w_max, params.n_controls);
  } else {
    if (!std::is_sorted(params.controls.begin(), params.controls.end()))
      throw std::invalid_argument("sl controls must be sorted");
    params.w_max = std::max(std::abs(params.controls.front()),
                            std::abs(params.controls.back()));
  }
  const bool has_zero =
      std::any_of(params.controls.begin(), params.controls.end(),
                  [](double w) { return std::abs(w) < 1e-15; });
  if (!has_zero)
    throw std::invalid_argument("sl controls must contain 0");
  if (params.w_max < spec.lipschitz_p - 1e-12)
    throw std::invalid_argument(
        "sl w_max below the catalog velocity bound (lipschitz_p)");
  if (params.legendre_p_max <= 0.0) params.legendre_p_max = spec.gradient_bound;
  if (params.max_iters <= 0) {
    const double iters =
        2.0 * std::log((spec.value_bound + 2.0) / params.tol) / params.dt +
        100.0;
    params.max_iters = static_cast<long>(std::min(iters, 9e17));
  }
  return params;
}

}  // namespace

std::vector<double> make_controls(double w_max, int n) {
  if (!(w_max > 0.0)) throw std::invalid_argument("controls need w_max > 0");
  n = std::max(n, 3);
  if (n % 2 == 0) ++n;  // symmetric grid containing 0 exactly
  std::vector<double> w(n);
  const double dw = 2.0 * w_max / (n - 1);
  for (int i = 0; i < n; ++i) w[i] = -w_max + i * dw;
  w[(n - 1) / 2] = 0.0;
  return w;
}

std::pair<GridFunction, SolveReport> solve_state_constraint_sl(
    const HamiltonianSpec& spec, const Grid1D& grid, SlParams params) {
  const auto t_start = std::chrono::steady_clock::now();
  params = fill_defaults(spec, params);
  const LegendreEval lag{spec, params.legendre_p_max, params.legendre_samples};

  const int n = grid.n;
  const int m = static_cast<int>(params.controls.size());
  const double dt = params.dt;
  const double disc = std::exp(-dt);

  // Per-control interpolation geometry: the foot x_i - dt w sits at constant
  // index offset o_w = -dt w / h from i.
  struct ControlPlan {
    int shift;       // floor(o_w)
    double frac;     // o_w - shift, in [0,1)
    bool integral;   // frac ~ 0: pure shift
    int i_lo, i_hi;  // nodes where the foot stays inside [a, b]
    std::vector<double> cost;  // dt * L(x_i, w)
  };
  std::vector<ControlPlan> plans(m);
  for (int c = 0; c < m; ++c) {
    const double w = params.controls[c];
    const double s = dt * w / grid.h;
    const double o = -s;
    ControlPlan plan;
    plan.shift = static_cast<int>(std::floor(o + 1e-12));
    plan.frac = o - plan.shift;
    plan.integral = plan.frac < 1e-9 || plan.frac > 1.0 - 1e-9;
    if (plan.frac > 1.0 - 1e-9) ++plan.shift;
    if (plan.integral) plan.frac = 0.0;
    // admissibility: i >= s and i <= n-1+s (exclusion of leaving feet);
    // nodes outside the range skip this control, or read the clamped
    // boundary value in projection mode
    plan.i_lo = static_cast<int>(std::ceil(s - 1e-9));
    plan.i_hi = static_cast<int>(std::floor(n - 1 + s + 1e-9));
    plan.i_lo = std::max(plan.i_lo, 0);
    plan.i_hi = std::min(plan.i_hi, n - 1);
    // index safety for the interpolation reads
    plan.i_lo = std::max(plan.i_lo, -plan.shift);
    plan.i_hi = std::min(
        plan.i_hi, plan.integral ? n - 1 - plan.shift : n - 2 - plan.shift);
    plan.cost.resize(n);
    if (x_independent(spec)) {
      const double lw = dt * lag(0.0, w);
      std::fill(plan.cost.begin(), plan.cost.end(), lw);
    } else {
      for (int i = 0; i < n; ++i) plan.cost[i] = dt * lag(grid.node(i), w);
    }
    plans[c] = std::move(plan);
  }

  // u0 = max_i of -H(x_i, 0), same comparison-cone start as the fd solver.
  double u0 = -kInf;
  for (int i = 0; i < n; ++i)
    u0 = std::max(u0, -eval_hamiltonian(spec, grid.node(i), 0.0));
  std::vector<double> u(n, u0), best(n);

  SolveReport report;
  double prev_inc = -1.0;
  double max_ratio = std::numeric_limits<double>::quiet_NaN();
  double inc = kInf;
  long iter = 0;
  while (iter < params.max_iters) {
    ++iter;
    std::fill(best.begin(), best.end(), kInf);
    for (const ControlPlan& plan : plans) {
      const double* cost = plan.cost.data();
      const double* uf = u.data() + plan.shift;
      if (plan.integral) {
        for (int i = plan.i_lo; i <= plan.i_hi; ++i)
          best[i] = std::min(best[i], cost[i] + disc * uf[i]);
      } else {
        const double f = plan.frac;
        const double g = 1.0 - f;
        for (int i = plan.i_lo; i <= plan.i_hi; ++i)
          best[i] =
              std::min(best[i], cost[i] + disc * (g * uf[i] + f * uf[i + 1]));
      }
      if (params.project_feet) {
        // feet beyond an endpoint clamp to it
        for (int i = 0; i < plan.i_lo; ++i)
          best[i] = std::min(best[i], cost[i] + disc * u[0]);
        for (int i = plan.i_hi + 1; i < n; ++i)
          best[i] = std::min(best[i], cost[i] + disc * u[n - 1]);
      }
    }
    inc = 0.0;
    for (int i = 0; i < n; ++i) inc = std::max(inc, std::abs(best[i] - u[i]));
    u.swap(best);
    if (prev_inc > 1e-9) {
      const double r = inc / prev_inc;
      if (std::isnan(max_ratio) || r > max_ratio) max_ratio = r;
    }
    prev_inc = inc;
    if (inc <= params.tol) {
      report.converged = true;
      break;
    }
  }

  report.iterations = iter;
  report.final_residual = inc;
  report.max_contraction_ratio = max_ratio;
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t_start)
                       .count();
  return {GridFunction{grid, std::move(u)}, report};
}

Trajectory extract_optimal_trajectory(const HamiltonianSpec& spec,
                                      const GridFunction& u, double x0,
                                      const SlParams& params_in,
                                      double horizon) {
  SlParams params = fill_defaults(spec, params_in);
  const LegendreEval lag{spec, params.legendre_p_max, params.legendre_samples};
  const Grid1D& grid = u.grid;
  const double dt = params.dt;
  const double disc = std::exp(-dt);
  if (x0 < grid.a - 1e-12 || x0 > grid.b + 1e-12)
    throw OutsideDomain("trajectory start outside the domain");

  const bool memo_l = x_independent(spec);
  std::vector<double> l_by_control(params.controls.size());
  if (memo_l)
    for (size_t c = 0; c < params.controls.size(); ++c)
      l_by_control[c] = lag(0.0, params.controls[c]);

  const long steps = static_cast<long>(std::ceil(horizon / dt - 1e-9));
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.controls_taken.reserve(steps);

  double x = std::clamp(x0, grid.a, grid.b);
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  for (long j = 0; j < steps; ++j) {
    double best_cost = kInf;
    double best_w = 0.0;
    for (size_t c = 0; c < params.controls.size(); ++c) {
      const double w = params.controls[c];
      double foot = x - dt * w;
      if (!params.project_feet &&
          (foot < grid.a - 1e-12 || foot > grid.b + 1e-12))
        continue;
      foot = std::clamp(foot, grid.a, grid.b);
      const double lw = memo_l ? l_by_control[c] : lag(x, w);
      const double cost = dt * lw + disc * u.interpolate(foot);
      if (best_cost == kInf) {
        best_cost = cost;
        best_w = w;
        continue;
      }
      const double tie = 1e-12 * (1.0 + std::abs(cost));
      if (cost < best_cost - tie) {
        best_cost = cost;
        best_w = w;
      } else if (cost <= best_cost + tie) {
        // tie: smallest |w|, then the negative sign first
        const double d = std::abs(w) - std::abs(best_w);
        if (d < -1e-15 || (std::abs(d) <= 1e-15 && w < best_w)) {
          best_cost = std::min(best_cost, cost);
          best_w = w;
        }
      }
    }
    x = std::clamp(x - dt * best_w, grid.a, grid.b);
    traj.controls_taken.push_back(best_w);
    traj.times.push_back((j + 1) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

double check_dpp_identity(const HamiltonianSpec& spec, const GridFunction& u,
                          const Trajectory& traj, double t) {
  if (traj.times.size() < 2)
    throw std::invalid_argument("dpp check needs a nonempty trajectory");
  const double dt = traj.times[1] - traj.times[0];
  const long steps = std::lround(t / dt);
  if (std::abs(steps * dt - t) > 1e-9 * std::max(1.0, t))
    throw std::invalid_argument("dpp check: t must align to step multiples");
  if (steps < 0 || steps >= static_cast<long>(traj.times.size()))
    throw std::invalid_argument("dpp check: t beyond trajectory horizon");

  const double p_max = spec.gradient_bound;
  double cost = 0.0;
  for (long j = 0; j < steps; ++j) {
    const double l =
        legendre_transform(spec, traj.states[j], traj.controls_taken[j], p_max,
                           2001);
    cost += std::exp(-traj.times[j]) * l * dt;
  }
  const double rhs = cost + std::exp(-t) * u.interpolate(traj.states[steps]);
  return std::abs(u.interpolate(traj.states[0]) - rhs);
}

bool check_velocity_bound(const Trajectory& traj, double bound) {
  for (double w : traj.controls_taken)
    if (std::abs(w) > bound) return false;
  return true;
}

CharacteristicReport check_characteristic_identity(const HamiltonianSpec& spec,
                                                   const GridFunction& u,
                                                   const Trajectory& traj) {
  const double delta_v = 1e-4;
  const double slope_cap = 1e8;  // a one-sided quotient through the
                                 // kLegendreInfinity sentinel means that side
                                 // of the subdifferential is unbounded
  const double p_cap = spec.gradient_bound + 1.0;
  const double p_max = spec.gradient_bound;
  const Grid1D& grid = u.grid;

  double w_sup = 0.0;
  for (double w : traj.controls_taken) w_sup = std::max(w_sup, std::abs(w));
  const double dt =
      traj.times.size() > 1 ? traj.times[1] - traj.times[0] : 0.0;
  const double boundary_margin = dt * w_sup * (1.0 + 1e-9) + 1e-12;

  CharacteristicReport rep;
  for (size_t j = 0; j < traj.controls_taken.size(); ++j) {
    const double x = traj.states[j];
    if (std::min(x - grid.a, grid.b - x) <= boundary_margin)
      continue;  // boundary arc: the identity is an interior statement
    const double w = traj.controls_taken[j];
    const double l0 = legendre_transform(spec, x, w, p_max, 2001);
    const double lm = legendre_transform(spec, x, w - delta_v, p_max, 2001);
    const double lp = legendre_transform(spec, x, w + delta_v, p_max, 2001);
    const double d_minus = (l0 - lm) / delta_v;
    const double d_plus = (lp - l0) / delta_v;
    const bool ok_minus = std::abs(d_minus) <= slope_cap;
    const bool ok_plus = std::abs(d_plus) <= slope_cap;
    if (!ok_minus && !ok_plus) continue;  // isolated point of the domain

    const double value = u.interpolate(x);
    double defect;
    double momentum;
    if (ok_minus && ok_plus && std::abs(d_plus - d_minus) <= 1e-3) {
      momentum = 0.5 * (d_minus + d_plus);  // centered difference of L in v
      defect = std::abs(value + eval_hamiltonian(spec, x, momentum));
    } else {
      // Kink of L: the one-sided quotients bracket the subdifferential;
      // pick the element that best closes the identity.
      double lo = ok_minus ? d_minus : -p_cap;
      double hi = ok_plus ? d_plus : p_cap;
      if (lo > hi) std::swap(lo, hi);
      defect = kInf;
      momentum = lo;
      const int scan = 2001;
      for (int s = 0; s < scan; ++s) {
        const double p = lo + (hi - lo) * s / (scan - 1);
        const double d = std::abs(value + eval_hamiltonian(spec, x, p));
        if (d < defect) {
          defect = d;
          momentum = p;
        }
      }
    }
    rep.max_defect = std::max(rep.max_defect, defect);
    rep.momenta.push_back(momentum);
    ++rep.steps_used;
  }
  if (rep.steps_used == 0)
    throw MomentumUndefined(
        "characteristic check: no interior step carries a momentum");
  return rep;
}

}  // namespace hjnest
