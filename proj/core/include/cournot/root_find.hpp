#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>

namespace cournot {

struct RootResult {
  double x = 0.0;
  double value = 0.0;  // f(x)
  std::size_t iterations = 0;
};

/// Bisection for a nonincreasing f with f(lo) >= 0 >= f(hi). Stops once the
/// bracket is narrower than `tol` and |f| <= tol at the midpoint, or when the
/// bracket collapses to adjacent doubles. Works on step-discontinuous f.
template <std::invocable<double> F>
RootResult bisect_decreasing(F&& f, double lo, double hi, double tol,
                             std::size_t max_iter = 400) {
  double f_lo = f(lo);
  if (f_lo <= 0.0) return {lo, f_lo, 0};
  double f_hi = f(hi);
  if (f_hi >= 0.0) return {hi, f_hi, 0};

  RootResult best{hi, f_hi, 0};
  if (std::abs(f_lo) < std::abs(f_hi)) best = {lo, f_lo, 0};
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      best.iterations = it;
      return best;
    }
    const double fm = f(mid);
    if (std::abs(fm) <= std::abs(best.value)) best = {mid, fm, it};
    if (fm == 0.0) return {mid, fm, it};
    if (fm > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= tol && std::abs(fm) <= tol) return {mid, fm, it};
  }
  best.iterations = max_iter;
  return best;
}

}  // namespace cournot
