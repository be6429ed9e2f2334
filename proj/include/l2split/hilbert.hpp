#pragma once

// Inner-product geometry of L^2[0,1]: <f,g>, ||f||, and the angle between
// two functions, with the collinear classification arccos(lambda/|lambda|).

#include "l2split/function.hpp"
#include "l2split/quadrature.hpp"

namespace l2split {

struct AngleReport {
  double inner = 0.0;
  double norm_f = 0.0;
  double norm_g = 0.0;
  double cosine = 0.0;         // clamped into [-1, 1]
  double theta_radians = 0.0;  // arccos(cosine), in [0, pi]
  bool clamp_applied = false;  // clamping moved the raw cosine by more than 1e-12
};

/// <f,g> = integral of f*g over [0,1], panels split at both handles'
/// breakpoints.
double inner_product(const FunctionHandle& f, const FunctionHandle& g,
                     const QuadratureConfig& cfg = {});

/// sqrt(<f,f>). Tiny negative quadrature results within -abs_tol clamp to 0;
/// anything lower raises NegativeNorm.
double l2_norm(const FunctionHandle& f, const QuadratureConfig& cfg = {});

/// Angle between two nonzero functions. Throws ZeroFunction when either norm
/// is at or below max(abs_tol, 1e-12).
AngleReport angle(const FunctionHandle& f, const FunctionHandle& g,
                  const QuadratureConfig& cfg = {});

/// Analytic angle between f and lambda*f: 0 for lambda > 0, pi for
/// lambda < 0. Throws ZeroScalar when lambda = 0.
double collinearity_angle(double lambda);

}  // namespace l2split
