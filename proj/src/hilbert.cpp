#include "l2split/hilbert.hpp"

#include <algorithm>
#include <cmath>

namespace l2split {

double inner_product(const FunctionHandle& f, const FunctionHandle& g,
                     const QuadratureConfig& cfg) {
  const std::vector<double> cuts = merged_breakpoints(f, g.breakpoints());
  return integrate_pointwise([&](double x) { return f.value_at(x) * g.value_at(x); }, cuts,
                             0.0, 1.0, cfg)
      .value;
}

double l2_norm(const FunctionHandle& f, const QuadratureConfig& cfg) {
  const double ff = inner_product(f, f, cfg);
  if (ff < -cfg.abs_tol)
    throw NegativeNorm("<f,f> = " + std::to_string(ff) + " below -abs_tol");
  return ff <= 0.0 ? 0.0 : std::sqrt(ff);
}

AngleReport angle(const FunctionHandle& f, const FunctionHandle& g,
                  const QuadratureConfig& cfg) {
  const double tol = std::max(cfg.abs_tol, 1e-12);
  AngleReport report;
  report.norm_f = l2_norm(f, cfg);
  report.norm_g = l2_norm(g, cfg);
  if (report.norm_f <= tol)
    throw ZeroFunction("angle undefined: ||" + f.label() + "|| below tolerance");
  if (report.norm_g <= tol)
    throw ZeroFunction("angle undefined: ||" + g.label() + "|| below tolerance");
  report.inner = inner_product(f, g, cfg);
  const double raw = report.inner / (report.norm_f * report.norm_g);
  report.cosine = std::clamp(raw, -1.0, 1.0);
  report.clamp_applied = std::abs(raw - report.cosine) > 1e-12;
  report.theta_radians = std::acos(report.cosine);
  return report;
}

double collinearity_angle(double lambda) {
  if (lambda == 0.0) throw ZeroScalar("collinearity angle undefined for lambda = 0");
  return lambda > 0.0 ? 0.0 : M_PI;
}

}  // namespace l2split
