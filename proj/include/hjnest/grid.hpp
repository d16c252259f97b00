#pragma once

#include <functional>
#include <vector>

#include "hjnest/errors.hpp"

namespace hjnest {

enum class Prototype { P1, P2 };

struct Interval {
  double a;
  double b;
};

/// P1: (-k, k) for k >= 1. P2: (-(1-1/k), 1-1/k) for k >= 2.
/// Throws InvalidIndex outside those ranges.
Interval build_domain(Prototype prototype, int k);

/// Uniform grid with pinned endpoints: node(0) == a and node(n-1) == b
/// exactly, h = (b-a)/(n-1).
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int n = 2;
  double h = 1.0;

  double node(int i) const { return i == n - 1 ? b : a + i * h; }
  std::vector<double> nodes() const;
};

Grid1D build_grid(double a, double b, int n);  // throws InvalidGrid

/// Grid with spacing as close as possible to h_request, node count forced
/// odd so that x = 0 lands on-grid for symmetric domains.
Grid1D build_grid_with_spacing(double a, double b, double h_request);

struct GridFunction {
  Grid1D grid;
  std::vector<double> values;

  /// Piecewise-linear interpolation; x clamped to [a, b].
  double interpolate(double x) const;
};

/// max over nodes with |x_i| <= R + 1e-12 of |f(x_i) - g(x_i)|.
/// Nodes outside the region are excluded on purpose: convergence can fail at
/// the domain boundary while holding on every compact subset.
/// Throws RegionTooLarge when R exceeds min(|a|, |b|).
double sup_error_on_region(const GridFunction& f,
                           const std::function<double(double)>& g, double R);

}  // namespace hjnest
