#include "hjnest/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hjnest {

Interval build_domain(Prototype prototype, int k) {
  if (prototype == Prototype::P1) {
    if (k < 1) throw InvalidIndex("P1 needs k >= 1, got " + std::to_string(k));
    return {-static_cast<double>(k), static_cast<double>(k)};
  }
  if (k < 2) throw InvalidIndex("P2 needs k >= 2, got " + std::to_string(k));
  const double r = 1.0 - 1.0 / k;
  return {-r, r};
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = node(i);
  return xs;
}

Grid1D build_grid(double a, double b, int n) {
  if (!(a < b)) throw InvalidGrid("grid needs a < b");
  if (n < 3) throw InvalidGrid("grid needs n >= 3");
  Grid1D g;
  g.a = a;
  g.b = b;
  g.n = n;
  g.h = (b - a) / (n - 1);
  return g;
}

Grid1D build_grid_with_spacing(double a, double b, double h_request) {
  if (!(a < b)) throw InvalidGrid("grid needs a < b");
  if (!(h_request > 0.0)) throw InvalidGrid("grid needs h > 0");
  int n = static_cast<int>(std::lround((b - a) / h_request)) + 1;
  n = std::max(n, 3);
  if (n % 2 == 0) ++n;  // odd count puts x = 0 on-grid for symmetric domains
  return build_grid(a, b, n);
}

double GridFunction::interpolate(double x) const {
  const double xc = std::clamp(x, grid.a, grid.b);
  int i = static_cast<int>(std::floor((xc - grid.a) / grid.h));
  i = std::clamp(i, 0, grid.n - 2);
  const double t = (xc - grid.node(i)) / grid.h;
  return values[i] * (1.0 - t) + values[i + 1] * t;
}

double sup_error_on_region(const GridFunction& f,
                           const std::function<double(double)>& g, double R) {
  const Grid1D& grid = f.grid;
  const double extent = std::min(std::abs(grid.a), std::abs(grid.b));
  if (R > extent + 1e-12)
    throw RegionTooLarge("region R = " + std::to_string(R) +
                         " exceeds grid extent " + std::to_string(extent));
  double worst = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    const double x = grid.node(i);
    if (std::abs(x) > R + 1e-12) continue;
    worst = std::max(worst, std::abs(f.values[i] - g(x)));
  }
  return worst;
}

}  // namespace hjnest
