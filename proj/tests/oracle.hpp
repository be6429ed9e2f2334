#pragma once

// Reference integrator for the test suites. Kept deliberately independent of
// the library quadrature path: composite trapezoid sums with one Richardson
// extrapolation step, compensated summation to keep the O(n) rounding noise
// out of the extrapolated digits.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

template <class F>
double trapezoid(F&& f, double a, double b, std::size_t intervals) {
  const double h = (b - a) / static_cast<double>(intervals);
  double sum = 0.5 * (f(a) + f(b));
  double carry = 0.0;  // Kahan compensation
  for (std::size_t i = 1; i < intervals; ++i) {
    const double term = f(a + h * static_cast<double>(i)) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum * h;
}

// Richardson-extrapolated trapezoid: cancels the h^2 error term between the
// n and 2n interval sums.
template <class F>
double integrate(F&& f, double a, double b, std::size_t intervals = 1'000'000) {
  const double coarse = trapezoid(f, a, b, intervals);
  const double fine = trapezoid(f, a, b, 2 * intervals);
  return (4.0 * fine - coarse) / 3.0;
}

template <class F, class G>
double inner_product(F&& f, G&& g, std::size_t intervals = 1'000'000) {
  return integrate([&](double x) { return f(x) * g(x); }, 0.0, 1.0, intervals);
}

template <class F>
double l2_norm(F&& f, std::size_t intervals = 1'000'000) {
  return std::sqrt(inner_product(f, f, intervals));
}

template <class F, class G>
double angle(F&& f, G&& g, std::size_t intervals = 1'000'000) {
  const double ip = inner_product(f, g, intervals);
  const double nf = l2_norm(f, intervals);
  const double ng = l2_norm(g, intervals);
  double c = ip / (nf * ng);
  if (c > 1.0) c = 1.0;
  if (c < -1.0) c = -1.0;
  return std::acos(c);
}

// Exact integral of sum c[k] x^k over [a, b] via the antiderivative.
inline double poly_integral(const std::vector<double>& coeffs, double a, double b) {
  double result = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double p = static_cast<double>(k + 1);
    result += coeffs[k] / p * (std::pow(b, p) - std::pow(a, p));
  }
  return result;
}

}  // namespace oracle
