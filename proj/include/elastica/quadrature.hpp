#pragma once

#include <functional>

namespace elastica {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod integration of f over [a, b].
///
/// Splits the interval with the largest error estimate until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|) or max_intervals is
/// reached. a > b is allowed and flips the sign.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                    double b, double abs_tol = 1e-13,
                                    double rel_tol = 1e-13, int max_intervals = 2000);

}  // namespace elastica
