#pragma once

// Closed-form expressions in one variable x over [0,1].
//
// Grammar (also documented in the CLI help):
//   expr    := term (('+'|'-') term)*
//   term    := factor (('*'|'/') factor)*
//   factor  := '-' factor | power
//   power   := primary ('^' factor)?
//   primary := number | 'x' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'
//
// '^' is right-associative and binds tighter than a unary minus applied
// outside it ("-x^2" is -(x^2)); the exponent itself may be signed ("x^-2").
// An exponent that is a literal number or a parenthesized literal quotient
// (p/q) is recorded as a rational in lowest terms, which selects the signed
// real-root semantics for odd q: (x-1/2)^(2/3) is real on all of [0,1].

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "l2split/errors.hpp"

namespace l2split {

enum class TokenKind {
  Number,
  Ident,
  Plus,
  Minus,
  Star,
  Slash,
  Caret,
  LParen,
  RParen,
  Comma,
};

struct Token {
  TokenKind kind;
  std::string_view text;  // slice of the source
  std::size_t position;   // 0-based character offset
};

/// Split source into tokens. Whitespace is skipped; `e` and `pi` lex as
/// plain identifiers. Throws LexError on any unrecognized character.
std::vector<Token> tokenize(std::string_view source);

/// Rational p/q in lowest terms with q >= 1 (p carries the sign).
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Exact rational for a double, derived from its shortest round-trip decimal
/// representation ("0.2" -> 1/5). Empty when the decimal does not fit in
/// 64-bit integers.
std::optional<Rational> rational_from_value(double value);

enum class ExprKind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

enum class Builtin { Exp, Ln, Sin, Cos, Tan, Abs, Sqrt, Cbrt };

/// Builtin constants keep their name so they print back as written.
enum class NamedConst { None, E, Pi };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression node. Trees are finite, acyclic, and safe to share
/// and evaluate concurrently.
struct Expr {
  ExprKind kind = ExprKind::Const;
  double value = 0.0;                        // Const
  NamedConst named = NamedConst::None;       // Const provenance (e, pi)
  Builtin func = Builtin::Exp;               // Call
  ExprPtr lhs;                               // unary child / binary left
  ExprPtr rhs;                               // binary right
  std::optional<Rational> pow_exponent;      // Pow: literal-rational exponent
};

ExprPtr make_const(double value);
ExprPtr make_named_const(NamedConst which);
ExprPtr make_var();
ExprPtr make_neg(ExprPtr child);
ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_pow(ExprPtr base, ExprPtr exponent);  // detects literal-rational exponents
ExprPtr make_call(Builtin func, ExprPtr arg);

/// Parse a token stream into an AST. Unknown identifiers and malformed
/// input raise ParseError with the offending position.
ExprPtr parse(const std::vector<Token>& tokens);

/// Convenience: tokenize + parse.
ExprPtr parse_expression(std::string_view source);

/// Evaluate at x in [0,1]. Throws EvalError on division by zero, ln of a
/// non-positive value, a negative base without a real-root exponent, or any
/// non-finite intermediate.
double eval(const Expr& e, double x);

/// Interior roots of affine arguments under abs(..) or under a Pow with a
/// literal-rational exponent, sorted. Non-affine arguments contribute
/// nothing; callers may add manual breakpoints.
std::vector<double> breakpoints(const Expr& e);

/// Render with minimal parentheses; the output re-parses to a structurally
/// identical tree.
std::string to_string(const Expr& e);

/// Deep structural equality, including literal-rational exponent metadata.
bool structurally_equal(const Expr& a, const Expr& b);

const char* builtin_name(Builtin f);
std::optional<Builtin> builtin_from_name(std::string_view name);

}  // namespace l2split
