#include <doctest.h>

#include <cmath>
#include <random>

#include "l2split/hilbert.hpp"
#include "l2split/quadrature.hpp"
#include "oracle.hpp"

using namespace l2split;

TEST_CASE("integrate reproduces the worked means") {
  const QuadratureConfig cfg;
  CHECK(integrate(from_expression("x"), 0, 1, cfg).value == doctest::Approx(0.5).epsilon(1e-12));

  // fractional power with a cusp at 1/2: 3/(5*4^(1/3))
  const auto frac = integrate(from_expression("(x-1/2)^(2/3)"), 0, 1, cfg);
  CHECK(frac.converged);
  CHECK(frac.value == doctest::Approx(3.0 / (5.0 * std::cbrt(4.0))).epsilon(1e-10));

  // sin(pi)/pi = 0
  const auto cospi = integrate(from_expression("cos(g*x)", {{"g", M_PI}}), 0, 1, cfg);
  CHECK(std::abs(cospi.value) <= 1e-10);
}

TEST_CASE("quadrature result invariants") {
  const QuadratureConfig cfg;
  const auto r = integrate(from_expression("exp(x)*cos(5*x)"), 0, 1, cfg);
  CHECK(r.converged);
  CHECK(r.error_estimate >= 0.0);
  CHECK(r.error_estimate <= std::max(cfg.abs_tol, cfg.rel_tol * std::abs(r.value)));
  CHECK(r.panels_used >= 1);
}

TEST_CASE("cumulative integrals") {
  const QuadratureConfig cfg;
  CHECK(cumulative(from_expression("x"), 1.0, cfg) == doctest::Approx(0.5));
  CHECK(cumulative(from_expression("exp(x)*cos(x)"), 0.0, cfg) == 0.0);
  CHECK(cumulative(from_expression("exp(x)"), 1.0, cfg) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK_THROWS_AS(cumulative(from_expression("x"), 1.5, cfg), OutOfDomain);
}

TEST_CASE("l1 norms, including kinks found by the sign scan") {
  const QuadratureConfig cfg;
  CHECK(l1_norm(from_expression("x-1/2"), cfg) == doctest::Approx(0.25).epsilon(1e-10));
  CHECK(l1_norm(from_expression("0"), cfg) == doctest::Approx(0.0));
  CHECK(l1_norm(from_expression("x"), cfg) == doctest::Approx(0.5));
  // sign change at an irrational point, not on the scan grid
  CHECK(l1_norm(from_expression("cos(pi*x)"), cfg) == doctest::Approx(2.0 / M_PI).epsilon(1e-10));
}

TEST_CASE("finite differences") {
  CHECK(finite_difference(from_expression("x^2"), 0.5, 1e-5) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(finite_difference(from_expression("7"), 0.5, 1e-5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(finite_difference(from_expression("x"), 0.0, 1e-5), OutOfDomain);
  CHECK_THROWS_AS(finite_difference(from_expression("x"), 0.999999, 1e-5), OutOfDomain);
}

TEST_CASE("integrate honors subinterval ranges and additivity") {
  const QuadratureConfig cfg;
  const FunctionHandle f = from_expression("exp(x)*sin(3*x)+abs(x-1/3)");
  const double whole = integrate(f, 0, 1, cfg).value;
  for (double m : {0.2, 1.0 / 3.0, 0.5, 0.77}) {
    const double split = integrate(f, 0, m, cfg).value + integrate(f, m, 1, cfg).value;
    CHECK(std::abs(whole - split) <= 2 * cfg.abs_tol);
  }
}

TEST_CASE("integration is linear in the integrand") {
  const QuadratureConfig cfg;
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> coeff(-10.0, 10.0);
  const FunctionHandle f = from_expression("exp(x)");
  const FunctionHandle g = from_expression("cos(3*x)");
  const double intf = integrate(f, 0, 1, cfg).value;
  const double intg = integrate(g, 0, 1, cfg).value;
  for (int i = 0; i < 10; ++i) {
    const double a = coeff(rng), b = coeff(rng);
    const FunctionHandle combo = sum(scaled(f, a), scaled(g, b));
    CHECK(integrate(combo, 0, 1, cfg).value ==
          doctest::Approx(a * intf + b * intg).epsilon(1e-9));
  }
}

TEST_CASE("panel rule integrates random degree-10 polynomials exactly") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> coeff(-5.0, 5.0);
  const QuadratureConfig cfg;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> c(11);
    std::string text;
    for (int k = 0; k < 11; ++k) {
      c[k] = coeff(rng);
      char term[64];
      std::snprintf(term, sizeof term, "%s%.17g*x^%d", k ? "+" : "", c[k], k);
      text += term;
    }
    const double expected = oracle::poly_integral(c, 0.0, 1.0);
    const auto got = integrate(from_expression(text), 0, 1, cfg);
    // a single panel suffices: the rule is exact through degree 29
    CHECK(got.value == doctest::Approx(expected).epsilon(1e-13));
  }
  // the edge of the exactness range
  CHECK(integrate(from_expression("x^29"), 0, 1, cfg).value ==
        doctest::Approx(1.0 / 30.0).epsilon(1e-13));
}

TEST_CASE("sampled bodies integrate exactly without adaptivity") {
  const QuadratureConfig cfg;
  // trapezoid areas: 0.5*(0.5)*(0+2)/... piecewise triangle
  const FunctionHandle tri = from_csv({{0.0, 0.0}, {0.5, 2.0}, {1.0, 0.0}}).handle;
  const auto r = integrate(tri, 0, 1, cfg);
  CHECK(r.value == doctest::Approx(1.0));
  CHECK(r.error_estimate == 0.0);
  CHECK(r.converged);
  // partial ranges cut panels mid-segment
  CHECK(integrate(tri, 0.25, 0.75, cfg).value == doctest::Approx(0.75));
  // shifted sampled data stays on the exact path
  CHECK(integrate(shifted(tri, -1.0), 0, 1, cfg).value == doctest::Approx(0.0));
}

TEST_CASE("unresolvable integrands raise NotConverged with a best value") {
  const QuadratureConfig cfg;
  const FunctionHandle rough = from_expression("sin(1/x)*1000");
  bool threw = false;
  try {
    integrate(rough, 0, 1, cfg);
  } catch (const NotConverged& e) {
    threw = true;
    CHECK(std::isfinite(e.best_value()));
    CHECK(e.error_estimate() > cfg.abs_tol);
  }
  CHECK(threw);
}

TEST_CASE("invalid ranges and configs are rejected") {
  const FunctionHandle f = from_expression("x");
  CHECK_THROWS_AS(integrate(f, 0.7, 0.3), OutOfDomain);
  CHECK_THROWS_AS(integrate(f, -0.1, 0.5), OutOfDomain);
  CHECK_THROWS_AS(integrate(f, 0.0, 1.5), OutOfDomain);
  QuadratureConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate(from_expression("exp(x)"), 0, 1, bad), OutOfDomain);
  bad = QuadratureConfig{};
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(integrate(from_expression("exp(x)"), 0, 1, bad), OutOfDomain);
}

TEST_CASE("Cauchy-Schwarz bound: l1 norm below l2 norm") {
  const QuadratureConfig cfg;
  for (const char* text : {"x", "x-1/2", "exp(2*x)", "cos(3*x)", "abs(x-1/4)", "(x-1/2)^(2/3)"}) {
    const FunctionHandle f = from_expression(text);
    CHECK(l1_norm(f, cfg) <= l2_norm(f, cfg) + 1e-9);
  }
}
