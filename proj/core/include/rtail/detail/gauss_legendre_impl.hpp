#pragma once

#include <cmath>
#include <sstream>

#include "rtail/error.hpp"

namespace rtail {

template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol,
                          double abs_tol, std::size_t initial_panels,
                          int max_doublings) {
  if (!(b > a)) return 0.0;
  std::size_t panels = initial_panels;
  double previous = integrate_panels(f, a, b, panels);
  for (int level = 0; level < max_doublings; ++level) {
    panels *= 2;
    const double current = integrate_panels(f, a, b, panels);
    if (std::abs(current - previous) <=
        rel_tol * std::abs(current) + abs_tol) {
      return current;
    }
    previous = current;
  }
  std::ostringstream msg;
  msg << "integrate_adaptive: no convergence on [" << a << ", " << b
      << "] after " << panels << " panels (last estimate " << previous << ")";
  throw NumericalError(msg.str());
}

}  // namespace rtail
