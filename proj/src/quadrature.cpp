#include "l2split/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

namespace l2split {

namespace {

constexpr int kPanelOrder = 15;

struct PanelRule {
  std::array<double, kPanelOrder> nodes;    // on (-1, 1)
  std::array<double, kPanelOrder> weights;  // sum to 2
};

// Gauss-Legendre nodes as roots of P_15, found by Newton iteration from the
// Chebyshev initial guesses; weights from the derivative at each root.
PanelRule build_panel_rule() {
  PanelRule rule{};
  const int n = kPanelOrder;
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      // Legendre recurrence: (k+1) P_{k+1} = (2k+1) x P_k - k P_{k-1}
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const PanelRule& panel_rule() {
  static const PanelRule rule = build_panel_rule();
  return rule;
}

double gauss_panel(const std::function<double(double)>& f, double a, double b) {
  const PanelRule& rule = panel_rule();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < kPanelOrder; ++i)
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

struct Panel {
  double a;
  double b;
  double value;  // single-level Gauss estimate
};

// Exact integral of a piecewise-linear handle: trapezoid over knot panels.
QuadratureResult integrate_linear_exact(const FunctionHandle& f, double a, double b) {
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double p : f.breakpoints())
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], r = cuts[i + 1];
    total += 0.5 * (r - l) * (f.value_at(l) + f.value_at(r));
  }
  QuadratureResult result;
  result.value = total;
  result.error_estimate = 0.0;
  result.panels_used = static_cast<int>(cuts.size()) - 1;
  result.converged = true;
  return result;
}

}  // namespace

QuadratureResult integrate_pointwise(const std::function<double(double)>& f,
                                     std::span<const double> breakpoints, double a, double b,
                                     const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || cfg.rel_tol < 0.0 || cfg.max_subdivisions < 1)
    throw OutOfDomain("integrate: config requires abs_tol > 0, rel_tol >= 0, "
                      "max_subdivisions >= 1");
  if (!(a >= 0.0 && a <= b && b <= 1.0))
    throw OutOfDomain("integrate: invalid range [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  QuadratureResult result;
  if (a == b) {
    result.converged = true;
    return result;
  }

  // seed panels split at interior breakpoints
  std::vector<double> cuts;
  cuts.push_back(a);
  for (double p : breakpoints)
    if (p > a + 1e-14 && p < b - 1e-14) cuts.push_back(p);
  cuts.push_back(b);

  std::vector<Panel> pending;
  double first_estimate = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p{cuts[i], cuts[i + 1], 0.0};
    p.value = gauss_panel(f, p.a, p.b);
    first_estimate += p.value;
    pending.push_back(p);
  }

  const double width = b - a;
  const double tol = std::max(cfg.abs_tol, cfg.rel_tol * std::abs(first_estimate));

  double accepted_value = 0.0;
  double accepted_error = 0.0;
  int accepted_panels = 0;
  int subdivisions = 0;

  while (!pending.empty()) {
    const Panel p = pending.back();
    pending.pop_back();
    const double mid = 0.5 * (p.a + p.b);
    const bool splittable = mid > p.a && mid < p.b;
    double refined = p.value;
    double diff = 0.0;
    Panel left{p.a, mid, 0.0}, right{mid, p.b, 0.0};
    if (splittable) {
      left.value = gauss_panel(f, left.a, left.b);
      right.value = gauss_panel(f, right.a, right.b);
      refined = left.value + right.value;
      diff = std::abs(refined - p.value);
    }
    const double share = tol * (p.b - p.a) / width;
    if (!splittable || diff <= share) {
      accepted_value += refined;
      // a panel too narrow to bisect is unverified: count its whole value
      accepted_error += splittable ? diff : std::abs(refined);
      ++accepted_panels;
      continue;
    }
    ++subdivisions;
    if (subdivisions > cfg.max_subdivisions) {
      double best = accepted_value + refined;
      double err = accepted_error + diff;
      for (const Panel& q : pending) {
        best += q.value;
        err += tol * (q.b - q.a) / width;  // unrefined panels: credit their share
      }
      throw NotConverged(best, err);
    }
    pending.push_back(left);
    pending.push_back(right);
  }

  result.value = accepted_value;
  result.error_estimate = accepted_error;
  result.panels_used = accepted_panels;
  result.converged = true;
  // degenerate unsplittable panels can leave residual error above tolerance
  if (result.error_estimate > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(result.value)))
    throw NotConverged(result.value, result.error_estimate);
  return result;
}

QuadratureResult integrate(const FunctionHandle& f, double a, double b,
                           const QuadratureConfig& cfg) {
  if (!(a >= 0.0 && a <= b && b <= 1.0))
    throw OutOfDomain("integrate: invalid range [" + std::to_string(a) + ", " +
                      std::to_string(b) + "]");
  if (a == b) {
    QuadratureResult r;
    r.converged = true;
    return r;
  }
  if (is_piecewise_linear(f)) return integrate_linear_exact(f, a, b);
  return integrate_pointwise([&f](double x) { return f.value_at(x); }, f.breakpoints(), a, b,
                             cfg);
}

double cumulative(const FunctionHandle& f, double x, const QuadratureConfig& cfg) {
  if (!(x >= 0.0 && x <= 1.0))
    throw OutOfDomain("cumulative: x = " + std::to_string(x) + " outside [0,1]");
  return integrate(f, 0.0, x, cfg).value;
}

namespace {

// Bisect a sign change of f inside [lo, hi] down to a 1e-12 bracket.
double refine_root(const std::function<double(double)>& f, double lo, double hi, double flo) {
  for (int iter = 0; iter < 64 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    double fm;
    try {
      fm = f(mid);
    } catch (const EvalError&) {
      break;
    }
    if (fm == 0.0) return mid;
    if ((flo < 0.0) == (fm < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double l1_norm(const FunctionHandle& f, const QuadratureConfig& cfg) {
  constexpr int kScan = 1024;
  auto value = [&f](double x) { return f.value_at(x); };

  std::vector<double> roots;
  double prev_x = 0.0;
  double prev_v = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= kScan; ++i) {
    const double x = static_cast<double>(i) / kScan;
    double v;
    try {
      v = value(x);
    } catch (const EvalError&) {
      have_prev = false;
      continue;
    }
    if (have_prev && prev_v * v < 0.0) roots.push_back(refine_root(value, prev_x, x, prev_v));
    prev_x = x;
    prev_v = v;
    have_prev = true;
  }

  std::vector<double> interior;
  for (double p : roots)
    if (p > 0.0 && p < 1.0) interior.push_back(p);
  const std::vector<double> cuts = merged_breakpoints(f, interior);

  return integrate_pointwise([&value](double x) { return std::abs(value(x)); }, cuts, 0.0, 1.0,
                             cfg)
      .value;
}

double finite_difference(const std::function<double(double)>& f, double x, double step) {
  if (!(step > 0.0)) throw OutOfDomain("finite_difference: step must be positive");
  if (!(x > 0.0 && x < 1.0) || x - step < 0.0 || x + step > 1.0)
    throw OutOfDomain("finite_difference: [x-step, x+step] not inside [0,1]");
  return (f(x + step) - f(x - step)) / (2.0 * step);
}

double finite_difference(const FunctionHandle& f, double x, double step) {
  return finite_difference(
      std::function<double(double)>([&f](double t) { return f.value_at(t); }), x, step);
}

}  // namespace l2split
