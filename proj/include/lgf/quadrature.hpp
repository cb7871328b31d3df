#pragma once

#include <functional>

namespace lgf {

struct QuadratureResult {
  double value;
  double error;      ///< estimated absolute error
  int subdivisions;  ///< number of bisections performed
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a, b]
/// (a > b allowed, yielding the negated integral). Intervals are bisected
/// worst-first until the summed error estimate drops below abs_tol or below
/// the rounding level of the result. Throws QuadratureError when
/// max_subdivisions is exhausted first.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                    double abs_tol, int max_subdivisions);

}  // namespace lgf
