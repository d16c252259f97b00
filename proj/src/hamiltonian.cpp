#include "hjnest/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace hjnest {

namespace {

// K(p) = -|p| for |p| <= 1, |p| - 2 beyond: the double-well profile shared
// by three catalog entries.
double double_well_profile(double p) {
  const double a = std::abs(p);
  return a <= 1.0 ? -a : a - 2.0;
}

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

HamiltonianSpec HamiltonianSpec::capped_cone(double alpha, double beta) {
  require(alpha > 0.0 && beta > 0.0, "capped-cone needs alpha, beta > 0");
  HamiltonianSpec s;
  s.id = HamiltonianId::CappedCone;
  s.alpha = alpha;
  s.beta = beta;
  s.is_convex_in_p = false;
  s.value_bound = alpha * beta;   // = -min H = sup|u_k|
  s.gradient_bound = 3.0 * beta;  // H(p) <= alpha beta forces |p| <= 3 beta
  s.lipschitz_p = alpha;
  return s;
}

HamiltonianSpec HamiltonianSpec::holder_cone(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "holder-cone needs gamma in (0,1)");
  HamiltonianSpec s;
  s.id = HamiltonianId::HolderCone;
  s.gamma = gamma;
  s.is_convex_in_p = false;
  s.value_bound = 1.0;
  s.gradient_bound = 3.0;  // |p| - 2 <= 1
  s.lipschitz_p = 1.0;     // away-from-kink bound; slope blows up at p = 0
  return s;
}

HamiltonianSpec HamiltonianSpec::shifted_eikonal() {
  HamiltonianSpec s;
  s.id = HamiltonianId::ShiftedEikonal1D;
  s.is_convex_in_p = true;
  s.value_bound = 1.0;
  s.gradient_bound = 3.0;  // |p-1| - 1 <= 1 forces p in [-1, 3]
  s.lipschitz_p = 1.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::double_well() {
  HamiltonianSpec s;
  s.id = HamiltonianId::DoubleWell1D;
  s.is_convex_in_p = false;
  s.value_bound = 1.0;
  s.gradient_bound = 3.0;
  s.lipschitz_p = 1.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::scaled_double_well(double m) {
  require(m > 1.0, "scaled-double-well needs m > 1");
  HamiltonianSpec s;
  s.id = HamiltonianId::ScaledDoubleWell;
  s.m = m;
  s.is_convex_in_p = false;
  // No uniform bounds exist (the entry is the unbounded-below example);
  // these hold for |x| <= kScaledWellDomainCap.
  s.value_bound = (1.0 + kScaledWellDomainCap) / m;
  s.gradient_bound = 2.0 + kScaledWellDomainCap;  // K(p) <= m vb at x = 0
  s.lipschitz_p = (1.0 + kScaledWellDomainCap) / m;
  return s;
}

HamiltonianSpec HamiltonianSpec::potential_double_well() {
  HamiltonianSpec s;
  s.id = HamiltonianId::PotentialDoubleWell;
  s.is_convex_in_p = false;
  s.value_bound = 1.0;
  s.gradient_bound = 3.0;
  s.lipschitz_p = 1.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::control_eikonal() {
  HamiltonianSpec s;
  s.id = HamiltonianId::ControlEikonal;
  s.is_convex_in_p = true;
  s.value_bound = 1.0;
  s.gradient_bound = 2.0;  // |p| - e^{-|x|} <= 1 forces |p| <= 2
  s.lipschitz_p = 1.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::pure_eikonal() {
  HamiltonianSpec s;
  s.id = HamiltonianId::PureEikonal;
  s.is_convex_in_p = true;
  s.value_bound = 1.0;
  s.gradient_bound = 1.0;
  s.lipschitz_p = 1.0;
  return s;
}

HamiltonianSpec HamiltonianSpec::from_string(const std::string& id,
                                             double alpha, double beta,
                                             double gamma, double m) {
  if (id == "capped-cone") return capped_cone(alpha, beta);
  if (id == "holder-cone") return holder_cone(gamma);
  if (id == "shifted-eikonal") return shifted_eikonal();
  if (id == "double-well") return double_well();
  if (id == "scaled-double-well") return scaled_double_well(m);
  if (id == "potential-double-well") return potential_double_well();
  if (id == "control-eikonal") return control_eikonal();
  if (id == "pure-eikonal") return pure_eikonal();
  throw UnknownExample("unknown example id: " + id);
}

std::string HamiltonianSpec::name() const {
  switch (id) {
    case HamiltonianId::CappedCone: return "capped-cone";
    case HamiltonianId::HolderCone: return "holder-cone";
    case HamiltonianId::ShiftedEikonal1D: return "shifted-eikonal";
    case HamiltonianId::DoubleWell1D: return "double-well";
    case HamiltonianId::ScaledDoubleWell: return "scaled-double-well";
    case HamiltonianId::PotentialDoubleWell: return "potential-double-well";
    case HamiltonianId::ControlEikonal: return "control-eikonal";
    case HamiltonianId::PureEikonal: return "pure-eikonal";
  }
  return "?";
}

double eval_hamiltonian(const HamiltonianSpec& spec, double x, double p) {
  const double ap = std::abs(p);
  switch (spec.id) {
    case HamiltonianId::CappedCone:
      return ap <= spec.beta ? -spec.alpha * ap
                             : spec.alpha * (ap - 2.0 * spec.beta);
    case HamiltonianId::HolderCone:
      return ap <= 1.0 ? -std::pow(ap, spec.gamma) : ap - 2.0;
    case HamiltonianId::ShiftedEikonal1D:
      return std::abs(p - 1.0) - 1.0;
    case HamiltonianId::DoubleWell1D:
      return double_well_profile(p);
    case HamiltonianId::ScaledDoubleWell:
      return (1.0 + std::abs(x)) / spec.m * double_well_profile(p);
    case HamiltonianId::PotentialDoubleWell:
      return double_well_profile(p) + std::exp(-std::abs(x));
    case HamiltonianId::ControlEikonal:
      return ap - std::exp(-std::abs(x));
    case HamiltonianId::PureEikonal:
      return ap;
  }
  return 0.0;
}

double legendre_transform(const HamiltonianSpec& spec, double x, double v,
                          double p_max, int n_samples) {
  if (!spec.is_convex_in_p)
    throw NonconvexHamiltonian("legendre_transform: " + spec.name() +
                               " is not convex in p");
  require(p_max >= spec.gradient_bound, "legendre p_max below gradient_bound");
  require(n_samples >= 3, "legendre needs n_samples >= 3");

  if (spec.id == HamiltonianId::ControlEikonal) {
    // Registered closed form: the effective domain is |v| <= 1.
    return std::abs(v) <= 1.0 ? std::exp(-std::abs(x)) : kLegendreInfinity;
  }

  double best = -kLegendreInfinity;
  const double dp = 2.0 * p_max / (n_samples - 1);
  for (int i = 0; i < n_samples; ++i) {
    const double p = -p_max + i * dp;
    best = std::max(best, p * v - eval_hamiltonian(spec, x, p));
  }
  return best;
}

double lipschitz_bound(const HamiltonianSpec& spec, double p_max,
                       double p_floor) {
  require(p_max > 0.0, "lipschitz_bound needs p_max > 0");
  switch (spec.id) {
    case HamiltonianId::CappedCone:
      return spec.alpha;
    case HamiltonianId::HolderCone: {
      if (p_floor <= 0.0) return 1.0;
      const double lo = std::min(p_floor, 1.0);
      return std::max(spec.gamma * std::pow(lo, spec.gamma - 1.0), 1.0);
    }
    case HamiltonianId::ScaledDoubleWell:
      return (1.0 + kScaledWellDomainCap) / spec.m;
    default:
      return 1.0;  // every remaining entry has unit slope pieces
  }
}

double lipschitz_bound_on_domain(const HamiltonianSpec& spec,
                                 double x_extent) {
  if (spec.id == HamiltonianId::ScaledDoubleWell)
    return (1.0 + std::abs(x_extent)) / spec.m;
  return spec.lipschitz_p;
}

double min_hamiltonian_on_interval(const HamiltonianSpec& spec, double x,
                                   double p_lo, double p_hi) {
  require(p_lo <= p_hi, "min_hamiltonian_on_interval: empty interval");
  // Every catalog entry is piecewise monotone in p with breakpoints drawn
  // from this set, so the min over an interval sits at a breakpoint or an
  // endpoint.
  static constexpr double base[] = {-1.0, 0.0, 1.0};
  std::vector<double> candidates{p_lo, p_hi};
  for (double b : base)
    if (b > p_lo && b < p_hi) candidates.push_back(b);
  if (spec.id == HamiltonianId::CappedCone) {
    for (double b : {-spec.beta, spec.beta})
      if (b > p_lo && b < p_hi) candidates.push_back(b);
  }
  double best = eval_hamiltonian(spec, x, candidates.front());
  for (double p : candidates)
    best = std::min(best, eval_hamiltonian(spec, x, p));
  return best;
}

}  // namespace hjnest
