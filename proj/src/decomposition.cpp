#include "l2split/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace l2split {

double project_mean(const FunctionHandle& f, const QuadratureConfig& cfg) {
  return integrate(f, 0.0, 1.0, cfg).value;
}

FunctionHandle project_fluctuation(const FunctionHandle& f, const QuadratureConfig& cfg) {
  const double mean = project_mean(f, cfg);
  FunctionHandle q = shifted(f, -mean);
  return FunctionHandle(q.body(), q.breakpoints(), "Q[" + f.label() + "]");
}

Potential::Potential(FunctionHandle f, double mean, QuadratureConfig cfg)
    : f_(std::move(f)), mean_(mean), cfg_(cfg) {}

double Potential::operator()(double x) const {
  if (x == 0.0) return 0.0;  // empty cumulative integral
  return cumulative(f_, x, cfg_) - x * mean_;
}

Potential potential(const FunctionHandle& f, const QuadratureConfig& cfg) {
  return Potential(f, project_mean(f, cfg), cfg);
}

VerificationReport verify(const FunctionHandle& f, const QuadratureConfig& cfg, int probes) {
  if (probes < 2) throw OutOfDomain("verify: need at least 2 probe points");

  const double mean = project_mean(f, cfg);
  const FunctionHandle pf = constant(mean);
  const FunctionHandle qf = shifted(f, -mean);

  VerificationReport report;

  // <Pf, Qf>
  report.orthogonality = std::abs(inner_product(pf, qf, cfg));

  // P(Qf) via integration: one quantity serves both the mean-zero residual
  // and the P.Q cross term
  const double p_of_q = integrate(qf, 0.0, 1.0, cfg).value;
  report.mean_of_q = std::abs(p_of_q);
  report.cross_p_of_q = std::abs(p_of_q);

  // P(Pf): integrating the constant handle again
  const double p_of_p = integrate(pf, 0.0, 1.0, cfg).value;
  report.idempotence_p = std::abs(p_of_p - mean);
  report.mean_of_p_matches = std::abs(p_of_p - mean);

  // Q applied to the projected handles, sampled at interior probes
  const FunctionHandle q_of_q = shifted(qf, -p_of_q);
  const FunctionHandle q_of_p = shifted(pf, -p_of_p);
  for (int i = 0; i < probes; ++i) {
    const double x = static_cast<double>(i + 1) / (probes + 1);
    report.idempotence_q =
        std::max(report.idempotence_q, std::abs(q_of_q.value_at(x) - qf.value_at(x)));
    report.cross_q_of_p = std::max(report.cross_q_of_p, std::abs(q_of_p.value_at(x)));
  }

  // ||f||^2 = (Pf)^2 + ||Qf||^2
  const double ff = inner_product(f, f, cfg);
  const double qq = inner_product(qf, qf, cfg);
  report.pythagoras = std::abs(ff - (mean * mean + qq));

  // potential: boundary value and Dh = Qf by central differences
  const Potential h(f, mean, cfg);
  report.potential_boundary = std::abs(h(1.0));
  const double step = 1e-5;
  for (int i = 0; i < probes; ++i) {
    const double x = step + (1.0 - 2.0 * step) * static_cast<double>(i + 1) / (probes + 1);
    const double fd = (h(x + step) - h(x - step)) / (2.0 * step);
    report.derivative_residual =
        std::max(report.derivative_residual, std::abs(fd - qf.value_at(x)));
  }

  // when P f vanishes, the fluctuation integral must vanish as well
  const double tol = 10.0 * cfg.abs_tol;
  report.zero_mean_case_checked = std::abs(mean) <= tol;
  report.zero_mean_case_ok = !report.zero_mean_case_checked || report.mean_of_q <= tol;

  return report;
}

Decomposition decompose(const FunctionHandle& f, const QuadratureConfig& cfg, int probes) {
  const double mean = project_mean(f, cfg);
  FunctionHandle qf = shifted(f, -mean);
  return Decomposition{mean,
                       FunctionHandle(qf.body(), qf.breakpoints(), "Q[" + f.label() + "]"),
                       Potential(f, mean, cfg), verify(f, cfg, probes)};
}

KernelReport kernel_membership(const FunctionHandle& f, const QuadratureConfig& cfg) {
  constexpr int kProbes = 257;
  KernelReport report;
  const double mean = project_mean(f, cfg);
  report.residual_p = std::abs(mean);
  for (int i = 0; i <= kProbes; ++i) {
    const double x = static_cast<double>(i) / kProbes;
    report.residual_q = std::max(report.residual_q, std::abs(f.value_at(x) - mean));
  }
  const double tol = 10.0 * cfg.abs_tol;
  report.in_ker_p = report.residual_p <= tol;
  report.in_ker_q = report.residual_q <= tol;
  return report;
}

ZeroCrossingReport zero_crossings(const FunctionHandle& f, const QuadratureConfig& cfg,
                                  int scan_points) {
  if (scan_points < 16) throw OutOfDomain("zero_crossings: scan_points must be >= 16");

  const double mean = project_mean(f, cfg);
  const FunctionHandle qf = shifted(f, -mean);
  auto q = [&qf](double x) { return qf.value_at(x); };

  std::vector<double> zeros;
  double prev_x = 0.0, prev_v = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= scan_points; ++i) {
    const double x = static_cast<double>(i) / scan_points;
    double v;
    try {
      v = q(x);
    } catch (const EvalError&) {
      have_prev = false;
      continue;
    }
    if (v == 0.0) {
      if (x > 0.0 && x < 1.0) zeros.push_back(x);
      have_prev = false;
      continue;
    }
    if (have_prev && prev_v * v < 0.0) {
      // bisect the bracket to width 1e-12
      double lo = prev_x, hi = x, flo = prev_v;
      while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        const double fm = q(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0.0) == (fm < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      if (root > 0.0 && root < 1.0) zeros.push_back(root);
    }
    prev_x = x;
    prev_v = v;
    have_prev = true;
  }
  std::sort(zeros.begin(), zeros.end());

  ZeroCrossingReport report;
  report.sign_change_found = !zeros.empty();
  for (double x0 : zeros) {
    ZeroCrossing z;
    z.x0 = x0;
    z.left_integral = integrate(qf, 0.0, x0, cfg).value;
    z.right_integral = integrate(qf, x0, 1.0, cfg).value;
    z.sum = z.left_integral + z.right_integral;
    report.zeros.push_back(z);
  }
  return report;
}

}  // namespace l2split
