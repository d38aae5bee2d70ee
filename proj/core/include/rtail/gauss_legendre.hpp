#pragma once

#include <cstddef>
#include <vector>

namespace rtail {

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes the rule by Newton iteration on P_n. Results for a given n are
/// cached; the returned reference stays valid for the program lifetime.
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre integral of f over [a, b] with `panels` equal
/// panels of `order` points each.
template <class F>
double integrate_panels(F&& f, double a, double b, std::size_t panels,
                        std::size_t order = 16) {
  const auto& rule = gauss_legendre(order);
  const double h = (b - a) / static_cast<double>(panels);
  long double total = 0.0L;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + h * static_cast<double>(p);
    const double mid = lo + 0.5 * h;
    long double s = 0.0L;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    }
    total += s * 0.5L * h;
  }
  return static_cast<double>(total);
}

/// Integral of f over [a, b]: panel count doubles from `initial_panels` until
/// two successive estimates agree to `rel_tol` (relative, with `abs_tol`
/// floor). Throws NumericalError after `max_doublings`.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-11,
                          double abs_tol = 1e-300,
                          std::size_t initial_panels = 4,
                          int max_doublings = 14);

}  // namespace rtail

#include "rtail/detail/gauss_legendre_impl.hpp"
