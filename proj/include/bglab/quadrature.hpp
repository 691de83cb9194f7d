#pragma once

#include <cstddef>
#include <functional>

namespace bglab::quad {

using Integrand = std::function<double(double)>;

struct Result {
  double value;
  double error_estimate;
  std::size_t evaluations;
};

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval. Splits the
/// worst subinterval until the summed error estimate is below
/// max(abs_tol, rel_tol * |value|) or max_intervals is reached.
Result gauss_kronrod(const Integrand& f, double a, double b, double abs_tol = 1e-13,
                     double rel_tol = 1e-13, std::size_t max_intervals = 2000);

/// Composite Gauss-Legendre rule: `panels` equal panels of `order` nodes.
/// Non-adaptive; nodes are computed by Newton iteration on P_order.
double gauss_legendre(const Integrand& f, double a, double b, std::size_t order = 32,
                      std::size_t panels = 16);

}  // namespace bglab::quad
