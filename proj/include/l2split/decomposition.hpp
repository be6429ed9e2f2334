#pragma once

// The orthogonal split of L^2[0,1] into constants plus mean-zero
// fluctuations: P f is the mean, Q f = f - P f, and the zero-trace potential
// h(x) = integral_0^x f - x * mean has Dh = Q f with h(0) = h(1) = 0.
// Every identity the split satisfies (orthogonality, idempotence, mean-zero
// fluctuation, Pythagoras, kernel characterizations) is re-checked
// numerically and reported as a residual.

#include <vector>

#include "l2split/hilbert.hpp"

namespace l2split {

struct VerificationReport {
  double orthogonality = 0.0;        // |<Pf, Qf>|
  double mean_of_q = 0.0;            // |integral of Qf|
  double idempotence_p = 0.0;        // |P(Pf) - Pf|
  double idempotence_q = 0.0;        // sup over probes |Q(Qf) - Qf|
  double cross_p_of_q = 0.0;         // |P(Qf)|
  double cross_q_of_p = 0.0;         // sup over probes |Q(Pf)|
  double pythagoras = 0.0;           // | ||f||^2 - ((Pf)^2 + ||Qf||^2) |
  double mean_of_p_matches = 0.0;    // |integral of Pf - integral of f|
  double potential_boundary = 0.0;   // |h(1)|
  double derivative_residual = 0.0;  // max over probes |fd(h, x) - Qf(x)|
  bool zero_mean_case_checked = false;  // |Pf| was below tolerance, so the
  bool zero_mean_case_ok = true;        // mean-zero consequence was asserted

  double cross_pq() const { return std::max(cross_p_of_q, cross_q_of_p); }
};

/// Zero-trace potential h(x) = cumulative(f, x) - x * mean. h(0) = 0 exactly
/// by construction; |h(1)| is quadrature-small.
class Potential {
 public:
  Potential(FunctionHandle f, double mean, QuadratureConfig cfg);

  double operator()(double x) const;
  double mean() const { return mean_; }

 private:
  FunctionHandle f_;
  double mean_;
  QuadratureConfig cfg_;
};

struct Decomposition {
  double mean;                 // P f, the constant part
  FunctionHandle fluctuation;  // Q f = f - mean, breakpoints preserved
  Potential potential;         // h with Dh = Q f
  VerificationReport residuals;
};

struct KernelReport {
  bool in_ker_p = false;
  bool in_ker_q = false;
  double residual_p = 0.0;  // |P f|
  double residual_q = 0.0;  // sup over probe grid |f(x) - P f|
};

struct ZeroCrossing {
  double x0;              // interior zero of Q f
  double left_integral;   // integral of Qf over [0, x0]
  double right_integral;  // integral of Qf over [x0, 1]
  double sum;             // left + right, equal to the full integral of Qf
};

struct ZeroCrossingReport {
  std::vector<ZeroCrossing> zeros;  // sorted; each bracketed by a sign change
  bool sign_change_found = false;   // false is reported, not fatal (Qf may be 0)
};

/// P f = integral of f over [0,1].
double project_mean(const FunctionHandle& f, const QuadratureConfig& cfg = {});

/// Q f = f - P f, constructed as a shift so reconstruction is pointwise
/// exact up to one floating add.
FunctionHandle project_fluctuation(const FunctionHandle& f, const QuadratureConfig& cfg = {});

Potential potential(const FunctionHandle& f, const QuadratureConfig& cfg = {});

/// Residuals for every identity: orthogonality, idempotence and cross terms
/// (P and Q applied to the already-projected handles), mean-zero
/// fluctuation, Pythagoras, the mean-preservation corollary, the potential's
/// boundary value, and the finite-difference check of Dh = Q f at interior
/// probes. probes >= 2.
VerificationReport verify(const FunctionHandle& f, const QuadratureConfig& cfg = {},
                          int probes = 50);

/// Mean, fluctuation, potential, and a fully populated report.
Decomposition decompose(const FunctionHandle& f, const QuadratureConfig& cfg = {},
                        int probes = 50);

/// ker P = mean-zero functions; ker Q = constants. Thresholds at
/// 10 * abs_tol to separate analytic zeros from quadrature noise.
KernelReport kernel_membership(const FunctionHandle& f, const QuadratureConfig& cfg = {});

/// Scan Q f on a uniform grid (scan_points >= 16), refine each sign-change
/// bracket by bisection to width 1e-12, and report the split integrals of
/// Q f on either side of every zero.
ZeroCrossingReport zero_crossings(const FunctionHandle& f, const QuadratureConfig& cfg = {},
                                  int scan_points = 1024);

}  // namespace l2split
