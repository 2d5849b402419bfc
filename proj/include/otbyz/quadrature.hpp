#pragma once

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace otbyz {

namespace detail {

// Bisects until the Kronrod error estimate is within an absolute budget.
template <typename F>
double adaptive_gk15(const F& f, double a, double b, double abs_tol, int depth) {
  double error = 0.0;
  const double estimate =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &error);
  if (error <= abs_tol || depth == 0) return estimate;
  const double mid = 0.5 * (a + b);
  return adaptive_gk15(f, a, mid, 0.5 * abs_tol, depth - 1) +
         adaptive_gk15(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

// Integral of f over [a, b] to an absolute tolerance. The interval is cut
// into cells no wider than `max_cell` before adaptive Gauss-Kronrod
// refinement, so a peak wider than a cell cannot fall between the nodes of
// the first rule. A cell where f vanishes at both ends and the midpoint is
// skipped.
template <typename F>
double integrate_cells(const F& f, double a, double b, double max_cell, double abs_tol = 1e-10) {
  if (!(b > a)) return 0.0;
  const int n_cells = std::max(1, static_cast<int>(std::ceil((b - a) / max_cell)));
  const double width = (b - a) / n_cells;
  const double cell_tol = abs_tol / n_cells;
  double total = 0.0;
  double f_lo = f(a);
  for (int i = 0; i < n_cells; ++i) {
    const double lo = a + i * width;
    const double hi = i + 1 == n_cells ? b : lo + width;
    const double f_hi = f(hi);
    if (f_lo == 0.0 && f_hi == 0.0 && f(0.5 * (lo + hi)) == 0.0) {
      f_lo = f_hi;
      continue;
    }
    total += detail::adaptive_gk15(f, lo, hi, cell_tol, 12);
    f_lo = f_hi;
  }
  return total;
}

}  // namespace otbyz
