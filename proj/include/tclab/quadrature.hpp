#pragma once

#include <vector>

namespace tclab {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Cached; safe to call concurrently.
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
template <class F>
double integrate_gl(F&& f, double a, double b, int order, int panels = 1) {
  const GaussRule& rule = gauss_legendre(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double panel = 0.0;
    for (int k = 0; k < order; ++k) panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    total += 0.5 * h * panel;
  }
  return total;
}

/// Trapezoid rule for a periodic integrand over one period [0, period).
template <class F>
double integrate_periodic(F&& f, double period, int nodes) {
  const double h = period / nodes;
  double total = 0.0;
  for (int k = 0; k < nodes; ++k) total += f(k * h);
  return total * h;
}

}  // namespace tclab
