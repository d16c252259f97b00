#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hjnest/errors.hpp"

namespace hjnest {

enum class RateModel { PowerLaw, Exponential };

std::string to_string(RateModel model);

/// Fitted decay model: PowerLaw e ~ C k^{-p} or Exponential e ~ C e^{-r k}
/// (exponent holds p, resp. the decay rate r per unit k).
struct RateFit {
  RateModel model;
  double amplitude;  // C > 0
  double exponent;   // p or r
  double rms_log_residual;
};

/// Unweighted least squares of log e over log k. Requires >= 3 distinct ks
/// and positive errors (DegenerateData otherwise). ks are real-valued so
/// callers may fit in a family's natural scale variable.
RateFit fit_power_law(std::span<const double> ks,
                      std::span<const double> errors);

/// Least squares of log e over k; exponent is the decay rate per unit k.
RateFit fit_exponential(std::span<const double> ks,
                        std::span<const double> errors);

/// Fits both models, returns the smaller rms_log_residual; ties within
/// 1e-12 go to PowerLaw. Additionally requires max(ks)/min(ks) >= 4.
std::pair<RateFit, RateModel> classify_rate(std::span<const double> ks,
                                            std::span<const double> errors);

/// Theorem bound shapes, named by what they compute:
///   QuadOverK2          C (1 + R^2) / k^2      (P1, general H)
///   ExpEnvelope         C e^{R/C} e^{-k/C}     (P1, H = a(x)K(p))
///   ExpEnvelopeConvex   C e^{R/C} e^{-k/C}     (P1, convex H)
///   InverseK            C / k                  (P2)
///   HolderPower         C k^{-g/(1-g)}         (Holder cone rate)
enum class RateBound {
  QuadOverK2,
  ExpEnvelope,
  ExpEnvelopeConvex,
  InverseK,
  HolderPower,
};

std::string to_string(RateBound bound);

struct BoundCheck {
  bool holds;
  double fitted_c;
};

/// Smallest constant C whose bound shape dominates every (k, e) point
/// (bisection for the shapes with C inside the exponent). holds is true when
/// that C is finite and the data does not cross the shape: the tail log-log
/// slope (last three points) of e_k / shape_C(k) must stay <= 0.25, which
/// separates bounded ratios from genuinely faster-growing error laws.
/// holder_gamma is consumed by HolderPower only. Errors must be measured on
/// the region |x| <= R. Throws DegenerateData as the fits do.
BoundCheck verify_theorem_bound(RateBound bound, std::span<const double> ks,
                                std::span<const double> errors, double R,
                                double holder_gamma = 0.5);

/// Drops points with error below 10 * floor (the solver discretization
/// floor); returns the surviving (k, error) pairs. floor <= 0 keeps all.
std::pair<std::vector<double>, std::vector<double>> apply_error_floor(
    std::span<const double> ks, std::span<const double> errors, double floor);

}  // namespace hjnest
