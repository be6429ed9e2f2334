#pragma once

// Adaptive quadrature over [0,1] subintervals. Panels are seeded at the
// integrand's breakpoints, each panel is evaluated with a fixed 15-point
// Gauss-Legendre rule, and a panel is accepted when one bisection changes
// its value by no more than its width-proportional share of the tolerance.
// Piecewise-linear (sampled) integrands bypass adaptivity: their integral
// is the exact trapezoid sum over the knot panels.

#include <functional>
#include <span>

#include "l2split/function.hpp"

namespace l2split {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_subdivisions = 10'000;
  // panel rule: fixed 15-point Gauss-Legendre
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int panels_used = 0;
  bool converged = false;  // implies error_estimate <= max(abs_tol, rel_tol*|value|)
};

/// Integrate f over [a,b], 0 <= a <= b <= 1. Throws NotConverged (with the
/// best value and outstanding estimate) when max_subdivisions is exhausted.
QuadratureResult integrate(const FunctionHandle& f, double a, double b,
                           const QuadratureConfig& cfg = {});

/// Adaptive core for arbitrary pointwise integrands with known interior
/// breakpoints; backbone for inner products and norms of products.
QuadratureResult integrate_pointwise(const std::function<double(double)>& f,
                                     std::span<const double> breakpoints, double a, double b,
                                     const QuadratureConfig& cfg = {});

/// The running integral: cumulative(f, x) = integral of f over [0, x].
double cumulative(const FunctionHandle& f, double x, const QuadratureConfig& cfg = {});

/// Integral of |f| over [0,1]; breakpoints are augmented with sign changes
/// located by a 1024-point scan refined by bisection.
double l1_norm(const FunctionHandle& f, const QuadratureConfig& cfg = {});

/// Central difference (f(x+step) - f(x-step)) / (2 step); requires
/// [x-step, x+step] inside [0,1].
double finite_difference(const FunctionHandle& f, double x, double step);
double finite_difference(const std::function<double(double)>& f, double x, double step);

}  // namespace l2split
