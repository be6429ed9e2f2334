#include <doctest.h>

#include <cmath>
#include <random>

#include "l2split/expr.hpp"

using namespace l2split;

TEST_CASE("tokenize basic streams") {
  auto tokens = tokenize("x^2");
  REQUIRE(tokens.size() == 3);
  CHECK(tokens[0].kind == TokenKind::Ident);
  CHECK(tokens[0].text == "x");
  CHECK(tokens[1].kind == TokenKind::Caret);
  CHECK(tokens[2].kind == TokenKind::Number);
  CHECK(tokens[2].text == "2");

  tokens = tokenize("abs(x-1/2)");
  REQUIRE(tokens.size() == 8);
  CHECK(tokens[0].kind == TokenKind::Ident);
  CHECK(tokens[0].text == "abs");
  CHECK(tokens[1].kind == TokenKind::LParen);
  CHECK(tokens[2].text == "x");
  CHECK(tokens[3].kind == TokenKind::Minus);
  CHECK(tokens[4].text == "1");
  CHECK(tokens[5].kind == TokenKind::Slash);
  CHECK(tokens[6].text == "2");
  CHECK(tokens[7].kind == TokenKind::RParen);
}

TEST_CASE("tokenize positions strictly increase and cover constants") {
  const auto tokens = tokenize("e + pi*x");
  REQUIRE(tokens.size() == 5);
  CHECK(tokens[0].kind == TokenKind::Ident);
  CHECK(tokens[2].kind == TokenKind::Ident);
  CHECK(tokens[2].text == "pi");
  for (std::size_t i = 1; i < tokens.size(); ++i)
    CHECK(tokens[i].position > tokens[i - 1].position);
}

TEST_CASE("tokenize rejects unrecognized characters with position") {
  try {
    tokenize("x $ 2");
    FAIL("expected LexError");
  } catch (const LexError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("parse records literal-rational exponents") {
  const ExprPtr e = parse_expression("(x-1/2)^(2/3)");
  REQUIRE(e->kind == ExprKind::Pow);
  REQUIRE(e->pow_exponent.has_value());
  CHECK(e->pow_exponent->num == 2);
  CHECK(e->pow_exponent->den == 3);
  CHECK(e->lhs->kind == ExprKind::Sub);
}

TEST_CASE("unary minus binds looser than caret") {
  const ExprPtr e = parse_expression("-x^2");
  REQUIRE(e->kind == ExprKind::Neg);
  REQUIRE(e->lhs->kind == ExprKind::Pow);
  CHECK(e->lhs->lhs->kind == ExprKind::Var);
  // and the caret is right-associative
  const ExprPtr c = parse_expression("2^3^2");
  REQUIRE(c->kind == ExprKind::Pow);
  CHECK(c->rhs->kind == ExprKind::Pow);
  CHECK(eval(*c, 0.0) == doctest::Approx(512.0));
}

TEST_CASE("parse errors carry position and expectation") {
  try {
    parse_expression("exp(");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 4);
    CHECK(e.expected() == "expression");
  }
  CHECK_THROWS_AS(parse_expression("x^^2"), ParseError);
  CHECK_THROWS_AS(parse_expression("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse_expression("1,2"), ParseError);
  CHECK_THROWS_AS(parse_expression(""), ParseError);
}

TEST_CASE("eval real-root semantics for fractional powers") {
  const ExprPtr e = parse_expression("(x-1/2)^(2/3)");
  // (1/2)^(2/3) by direct powering of the magnitude
  CHECK(eval(*e, 0.0) == doctest::Approx(std::pow(0.5, 2.0 / 3.0)).epsilon(1e-15));
  CHECK(eval(*e, 0.5) == 0.0);
  // odd p keeps the sign
  const ExprPtr cube = parse_expression("(x-1/2)^(1/3)");
  CHECK(eval(*cube, 0.0) == doctest::Approx(-std::cbrt(0.5)).epsilon(1e-15));
}

TEST_CASE("eval basics and errors") {
  CHECK(eval(*parse_expression("abs(x-1/2)"), 0.75) == doctest::Approx(0.25));
  CHECK(eval(*parse_expression("x^0.5"), 0.25) == doctest::Approx(0.5));
  CHECK(eval(*parse_expression("e"), 0.3) == doctest::Approx(std::exp(1.0)));
  CHECK(eval(*parse_expression("pi"), 0.3) == doctest::Approx(M_PI));
  CHECK_THROWS_AS(eval(*parse_expression("(x-1)^0.5"), 0.5), EvalError);  // negative base
  CHECK_THROWS_AS(eval(*parse_expression("1/(x-1/2)"), 0.5), EvalError);
  CHECK_THROWS_AS(eval(*parse_expression("ln(x)"), 0.0), EvalError);
  CHECK_THROWS_AS(eval(*parse_expression("sqrt(x-1)"), 0.0), EvalError);
  CHECK_THROWS_AS(eval(*parse_expression("exp(1/x)"), 1e-300), EvalError);  // overflow
  CHECK(eval(*parse_expression("cbrt(x-1)"), 0.0) == doctest::Approx(-1.0));
}

TEST_CASE("signed exponents and decimal rationals") {
  // x^-2 at 0.5 -> 4
  CHECK(eval(*parse_expression("x^-2"), 0.5) == doctest::Approx(4.0));
  // decimal literal 0.2 reduces to 1/5: odd denominator, real root applies
  CHECK(eval(*parse_expression("(x-1/2)^0.2"), 0.0) ==
        doctest::Approx(-std::pow(0.5, 0.2)).epsilon(1e-15));
}

TEST_CASE("breakpoints of affine kink arguments") {
  CHECK(breakpoints(*parse_expression("abs(x-1/2)")) == std::vector<double>{0.5});
  CHECK(breakpoints(*parse_expression("(x-1/2)^(2/3)")) == std::vector<double>{0.5});
  CHECK(breakpoints(*parse_expression("exp(2*x)")).empty());
  // roots at the boundary are not interior
  CHECK(breakpoints(*parse_expression("abs(x)")).empty());
  // scaled affine argument, root at 3/4
  const auto pts = breakpoints(*parse_expression("abs(2*x-3/2)"));
  REQUIRE(pts.size() == 1);
  CHECK(pts[0] == doctest::Approx(0.75));
  // non-affine arguments contribute nothing
  CHECK(breakpoints(*parse_expression("abs(x*x-1/4)")).empty());
}

namespace {

// random AST generator for the round-trip property
ExprPtr random_expr(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 8);
  std::uniform_real_distribution<double> val(0.0, 10.0);
  switch (pick(rng)) {
    case 0: return make_const(val(rng));
    case 1: return make_var();
    case 2:
      return std::uniform_int_distribution<int>(0, 1)(rng) ? make_named_const(NamedConst::E)
                                                           : make_named_const(NamedConst::Pi);
    case 3: return make_neg(random_expr(rng, depth - 1));
    case 4:
      return make_binary(ExprKind::Add, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5:
      return make_binary(ExprKind::Sub, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 6:
      return make_binary(ExprKind::Mul, random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 7: {
      const int f = std::uniform_int_distribution<int>(0, 7)(rng);
      return make_call(static_cast<Builtin>(f), random_expr(rng, depth - 1));
    }
    default:
      return make_pow(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST_CASE("pretty-print round trip preserves structure") {
  std::mt19937 rng(8675309);
  for (int i = 0; i < 300; ++i) {
    const ExprPtr e = random_expr(rng, 4);
    const std::string text = to_string(*e);
    CAPTURE(text);
    const ExprPtr back = parse_expression(text);
    CHECK(structurally_equal(*e, *back));
  }
  // a few fixed shapes worth pinning
  for (const char* source : {"-x^2", "x^-2", "(x-1/2)^(2/3)", "x^(1/2)", "abs(x-1/2)-1/4",
                             "1-2-3", "1-(2-3)", "x/2/3", "x/(2/3)", "-(x*x)", "2*e^x"}) {
    const ExprPtr e = parse_expression(source);
    CHECK(structurally_equal(*e, *parse_expression(to_string(*e))));
  }
}

TEST_CASE("precedence: a+b*x evaluates as a plus b times x") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-50.0, 50.0);
  for (int i = 0; i < 50; ++i) {
    const double a = dist(rng), b = dist(rng), x = std::uniform_real_distribution<double>(0, 1)(rng);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g+%.17g*x", a, b);
    const double got = eval(*parse_expression(buf), x);
    CHECK(got == doctest::Approx(a + b * x).epsilon(1e-15));
  }
}

TEST_CASE("real-root semantics agree with abs powering") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> cdist(0.1, 0.9);
  for (int i = 0; i < 20; ++i) {
    const double c = cdist(rng);
    char with_sign[64], with_abs[64];
    std::snprintf(with_sign, sizeof with_sign, "(x-%.17g)^(2/3)", c);
    std::snprintf(with_abs, sizeof with_abs, "abs(x-%.17g)^(2/3)", c);
    const ExprPtr lhs = parse_expression(with_sign);
    const ExprPtr rhs = parse_expression(with_abs);
    for (int k = 0; k <= 20; ++k) {
      const double x = k / 20.0;
      CHECK(eval(*lhs, x) == doctest::Approx(eval(*rhs, x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("eval is deterministic") {
  const ExprPtr e = parse_expression("exp(x)*cos(3*x)+x^(2/3)");
  for (double x : {0.0, 0.25, 0.7, 1.0}) CHECK(eval(*e, x) == eval(*e, x));
}

TEST_CASE("rational_from_value uses shortest decimal form") {
  auto r = rational_from_value(0.5);
  REQUIRE(r.has_value());
  CHECK(r->num == 1);
  CHECK(r->den == 2);
  r = rational_from_value(0.1);
  REQUIRE(r.has_value());
  CHECK(r->num == 1);
  CHECK(r->den == 10);
  r = rational_from_value(3.0);
  REQUIRE(r.has_value());
  CHECK(r->num == 3);
  CHECK(r->den == 1);
  CHECK_FALSE(rational_from_value(1e300).has_value());  // does not fit
}
