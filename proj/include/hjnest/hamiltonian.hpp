#pragma once

#include <string>

#include "hjnest/errors.hpp"

namespace hjnest {

/// Value returned by legendre_transform outside the effective domain of L.
/// A large finite sentinel rather than infinity, so that semi-Lagrangian
/// minimization steps over inadmissible velocities without NaN traps.
inline constexpr double kLegendreInfinity = 1e12;

/// |x| cap under which the ScaledDoubleWell metadata (value_bound,
/// gradient_bound, lipschitz_p) is valid. That entry has no uniform bounds:
/// both sup|u_k| and the p-Lipschitz constant grow linearly with the domain.
inline constexpr double kScaledWellDomainCap = 64.0;

enum class HamiltonianId {
  CappedCone,           // H(p) = -a|p| on |p|<=b, a(|p|-2b) beyond
  HolderCone,           // H(p) = -|p|^g on |p|<=1, |p|-2 beyond
  ShiftedEikonal1D,     // H(p) = |p-1| - 1
  DoubleWell1D,         // K(p) = -|p| on |p|<=1, |p|-2 beyond
  ScaledDoubleWell,     // H(x,p) = ((1+|x|)/m) K(p)
  PotentialDoubleWell,  // H(x,p) = K(p) + e^{-|x|}
  ControlEikonal,       // H(x,p) = |p| - e^{-|x|}
  PureEikonal,          // H(p) = |p|
};

/// One catalog entry: an evaluable Hamiltonian H(x,p) plus verified metadata.
///
/// value_bound    bounds both -H (so constants >= value_bound are
///                supersolutions) and sup-norm of any state-constraint
///                solution; also >= sup_x |H(x,0)|.
/// gradient_bound the coercivity threshold: H(x,p) <= value_bound forces
///                |p| <= gradient_bound. Solution slopes stay below it.
/// lipschitz_p    Lipschitz constant of p -> H(x,p) on |p| <= gradient_bound,
///                used as the artificial-viscosity coefficient. For
///                HolderCone the slope blows up at p=0; the stored value 1 is
///                the bound away from the kink (see lipschitz_bound).
///
/// All fields are immutable after construction; every operation on a spec is
/// pure and safe to call concurrently.
struct HamiltonianSpec {
  HamiltonianId id;
  double alpha = 1.0;  // CappedCone slope
  double beta = 1.0;   // CappedCone cap radius
  double gamma = 0.5;  // HolderCone exponent, in (0,1)
  double m = 2.0;      // ScaledDoubleWell power, > 1
  bool is_convex_in_p = false;
  double value_bound = 1.0;
  double gradient_bound = 1.0;
  double lipschitz_p = 1.0;

  static HamiltonianSpec capped_cone(double alpha, double beta);
  static HamiltonianSpec holder_cone(double gamma);
  static HamiltonianSpec shifted_eikonal();
  static HamiltonianSpec double_well();
  static HamiltonianSpec scaled_double_well(double m);
  static HamiltonianSpec potential_double_well();
  static HamiltonianSpec control_eikonal();
  static HamiltonianSpec pure_eikonal();

  /// CLI/config id: "capped-cone", "holder-cone", "shifted-eikonal",
  /// "double-well", "scaled-double-well", "potential-double-well",
  /// "control-eikonal", "pure-eikonal". Parameters alpha/beta/gamma/m are
  /// applied where the entry uses them. Throws UnknownExample.
  static HamiltonianSpec from_string(const std::string& id, double alpha = 1.0,
                                     double beta = 1.0, double gamma = 0.5,
                                     double m = 2.0);
  std::string name() const;
};

double eval_hamiltonian(const HamiltonianSpec& spec, double x, double p);

/// L(x,v) = sup_{|p|<=p_max} (p v - H(x,p)) over a uniform n_samples grid.
/// ControlEikonal has a registered closed form (e^{-|x|} for |v|<=1,
/// kLegendreInfinity otherwise) which is returned instead of the numeric sup.
/// Throws NonconvexHamiltonian for entries not convex in p.
double legendre_transform(const HamiltonianSpec& spec, double x, double v,
                          double p_max, int n_samples);

/// Upper bound on |dH/dp| over |p| <= p_max, analytic per entry.
/// For HolderCone the slope g|p|^{g-1} is unbounded at 0; with p_floor > 0
/// the bound over |p| in [p_floor, p_max] is returned, and with p_floor == 0
/// the away-from-kink bound 1 (the coefficient the fd solver uses).
double lipschitz_bound(const HamiltonianSpec& spec, double p_max,
                       double p_floor = 0.0);

/// Like lipschitz_bound but uniform over |x| <= x_extent; differs from the
/// stored lipschitz_p only for ScaledDoubleWell, where it is (1+x_extent)/m.
double lipschitz_bound_on_domain(const HamiltonianSpec& spec, double x_extent);

/// Exact min of H(x,.) over [p_lo, p_hi], from the entry's breakpoints.
/// Backs the boundary rows of the fd solver.
double min_hamiltonian_on_interval(const HamiltonianSpec& spec, double x,
                                   double p_lo, double p_hi);

}  // namespace hjnest
