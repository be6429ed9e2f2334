#include "l2split/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace l2split {

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < source.size()) {
    const char c = source[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    TokenKind kind;
    switch (c) {
      case '+': kind = TokenKind::Plus; ++i; break;
      case '-': kind = TokenKind::Minus; ++i; break;
      case '*': kind = TokenKind::Star; ++i; break;
      case '/': kind = TokenKind::Slash; ++i; break;
      case '^': kind = TokenKind::Caret; ++i; break;
      case '(': kind = TokenKind::LParen; ++i; break;
      case ')': kind = TokenKind::RParen; ++i; break;
      case ',': kind = TokenKind::Comma; ++i; break;
      default:
        if (is_digit(c) || (c == '.' && i + 1 < source.size() && is_digit(source[i + 1]))) {
          kind = TokenKind::Number;
          while (i < source.size() && is_digit(source[i])) ++i;
          if (i < source.size() && source[i] == '.') {
            ++i;
            while (i < source.size() && is_digit(source[i])) ++i;
          }
          // optional exponent part: e/E [+-] digits
          if (i < source.size() && (source[i] == 'e' || source[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < source.size() && (source[j] == '+' || source[j] == '-')) ++j;
            if (j < source.size() && is_digit(source[j])) {
              ++j;
              while (j < source.size() && is_digit(source[j])) ++j;
              i = j;
            }
          }
        } else if (is_ident_start(c)) {
          kind = TokenKind::Ident;
          while (i < source.size() && is_ident_char(source[i])) ++i;
        } else {
          throw LexError(start, std::string("unrecognized character '") + c + "'");
        }
    }
    tokens.push_back(Token{kind, source.substr(start, i - start), start});
  }
  return tokens;
}

// ---------------------------------------------------------------------------
// Rational exponents

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

std::optional<Rational> reduce(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Rational{0, 1};
  const std::int64_t g = gcd64(num, den);
  return Rational{num / g, den / g};
}

// p/q from a plain decimal string "[-]digits[.digits][eE[+-]digits]".
std::optional<Rational> rational_from_decimal_text(std::string_view text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t digits = 0;
  int frac_len = 0;
  int exp10 = 0;
  bool any_digit = false;
  bool in_frac = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '.') {
      if (in_frac) return std::nullopt;
      in_frac = true;
    } else if (c == 'e' || c == 'E') {
      const auto tail = text.substr(i + 1);
      int e = 0;
      auto [p, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), e);
      if (ec != std::errc{} || p != tail.data() + tail.size()) return std::nullopt;
      exp10 = e;
      break;
    } else if (c >= '0' && c <= '9') {
      if (digits > (INT64_MAX - 9) / 10) return std::nullopt;  // too many digits
      digits = digits * 10 + (c - '0');
      if (in_frac) ++frac_len;
      any_digit = true;
    } else {
      return std::nullopt;
    }
  }
  if (!any_digit) return std::nullopt;
  if (negative) digits = -digits;
  int power = exp10 - frac_len;
  std::int64_t num = digits;
  std::int64_t den = 1;
  for (; power > 0; --power) {
    if (num > INT64_MAX / 10 || num < INT64_MIN / 10) return std::nullopt;
    num *= 10;
  }
  for (; power < 0; ++power) {
    if (den > INT64_MAX / 10) return std::nullopt;
    den *= 10;
  }
  return reduce(num, den);
}

}  // namespace

std::optional<Rational> rational_from_value(double value) {
  if (!std::isfinite(value)) return std::nullopt;
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return rational_from_decimal_text(std::string_view(buf, res.ptr - buf));
}

// ---------------------------------------------------------------------------
// Node construction

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

// Literal-rational view of an exponent subtree: a number, a sign-flipped
// number, or a quotient of two such.
std::optional<Rational> literal_rational(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Const:
      if (e.named != NamedConst::None) return std::nullopt;  // e, pi are not literals
      return rational_from_value(e.value);
    case ExprKind::Neg: {
      auto r = literal_rational(*e.lhs);
      if (r) r->num = -r->num;
      return r;
    }
    case ExprKind::Div: {
      const auto n = literal_rational(*e.lhs);
      const auto d = literal_rational(*e.rhs);
      if (!n || !d || d->num == 0) return std::nullopt;
      // (a/b) / (c/d) = ad / bc, with overflow guards
      const double check = static_cast<double>(n->num) * static_cast<double>(d->den);
      const double check2 = static_cast<double>(n->den) * static_cast<double>(d->num);
      if (std::abs(check) > 9.0e18 || std::abs(check2) > 9.0e18) return std::nullopt;
      return reduce(n->num * d->den, n->den * d->num);
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

ExprPtr make_const(double value) {
  Expr e;
  e.kind = ExprKind::Const;
  e.value = value;
  return node(std::move(e));
}

ExprPtr make_named_const(NamedConst which) {
  Expr e;
  e.kind = ExprKind::Const;
  e.named = which;
  e.value = which == NamedConst::E ? 2.71828182845904523536 : 3.14159265358979323846;
  return node(std::move(e));
}

ExprPtr make_var() {
  Expr e;
  e.kind = ExprKind::Var;
  return node(std::move(e));
}

ExprPtr make_neg(ExprPtr child) {
  Expr e;
  e.kind = ExprKind::Neg;
  e.lhs = std::move(child);
  return node(std::move(e));
}

ExprPtr make_binary(ExprKind kind, ExprPtr lhs, ExprPtr rhs) {
  Expr e;
  e.kind = kind;
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  return node(std::move(e));
}

ExprPtr make_pow(ExprPtr base, ExprPtr exponent) {
  Expr e;
  e.kind = ExprKind::Pow;
  e.pow_exponent = literal_rational(*exponent);
  e.lhs = std::move(base);
  e.rhs = std::move(exponent);
  return node(std::move(e));
}

ExprPtr make_call(Builtin func, ExprPtr arg) {
  Expr e;
  e.kind = ExprKind::Call;
  e.func = func;
  e.lhs = std::move(arg);
  return node(std::move(e));
}

const char* builtin_name(Builtin f) {
  switch (f) {
    case Builtin::Exp: return "exp";
    case Builtin::Ln: return "ln";
    case Builtin::Sin: return "sin";
    case Builtin::Cos: return "cos";
    case Builtin::Tan: return "tan";
    case Builtin::Abs: return "abs";
    case Builtin::Sqrt: return "sqrt";
    case Builtin::Cbrt: return "cbrt";
  }
  return "?";
}

std::optional<Builtin> builtin_from_name(std::string_view name) {
  static constexpr std::array<Builtin, 8> all = {Builtin::Exp,  Builtin::Ln,  Builtin::Sin,
                                                 Builtin::Cos,  Builtin::Tan, Builtin::Abs,
                                                 Builtin::Sqrt, Builtin::Cbrt};
  for (Builtin f : all)
    if (name == builtin_name(f)) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Recursive descent parser

namespace {

class Parser {
 public:
  explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

  ExprPtr run() {
    ExprPtr e = expr();
    if (pos_ < tokens_.size())
      throw ParseError(tokens_[pos_].position, "end of input");
    return e;
  }

 private:
  const std::vector<Token>& tokens_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= tokens_.size(); }

  std::size_t error_position() const {
    if (!at_end()) return tokens_[pos_].position;
    if (tokens_.empty()) return 0;
    const Token& last = tokens_.back();
    return last.position + last.text.size();
  }

  bool peek_is(TokenKind k) const { return !at_end() && tokens_[pos_].kind == k; }

  bool consume_if(TokenKind k) {
    if (!peek_is(k)) return false;
    ++pos_;
    return true;
  }

  const Token& expect(TokenKind k, const char* what) {
    if (!peek_is(k)) throw ParseError(error_position(), what);
    return tokens_[pos_++];
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    for (;;) {
      if (consume_if(TokenKind::Plus))
        lhs = make_binary(ExprKind::Add, std::move(lhs), term());
      else if (consume_if(TokenKind::Minus))
        lhs = make_binary(ExprKind::Sub, std::move(lhs), term());
      else
        return lhs;
    }
  }

  ExprPtr term() {
    ExprPtr lhs = factor();
    for (;;) {
      if (consume_if(TokenKind::Star))
        lhs = make_binary(ExprKind::Mul, std::move(lhs), factor());
      else if (consume_if(TokenKind::Slash))
        lhs = make_binary(ExprKind::Div, std::move(lhs), factor());
      else
        return lhs;
    }
  }

  ExprPtr factor() {
    if (consume_if(TokenKind::Minus)) return make_neg(factor());
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (consume_if(TokenKind::Caret)) return make_pow(std::move(base), factor());
    return base;
  }

  ExprPtr primary() {
    if (at_end()) throw ParseError(error_position(), "expression");
    const Token& tok = tokens_[pos_];
    switch (tok.kind) {
      case TokenKind::Number: {
        ++pos_;
        char* end = nullptr;
        const std::string text(tok.text);
        const double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || !std::isfinite(v))
          throw ParseError(tok.position, "finite number");
        return make_const(v);
      }
      case TokenKind::Ident: {
        ++pos_;
        if (tok.text == "x") return make_var();
        if (tok.text == "e") return make_named_const(NamedConst::E);
        if (tok.text == "pi") return make_named_const(NamedConst::Pi);
        if (auto f = builtin_from_name(tok.text)) {
          expect(TokenKind::LParen, "'(' after function name");
          ExprPtr arg = expr();
          expect(TokenKind::RParen, "')'");
          return make_call(*f, std::move(arg));
        }
        throw ParseError(tok.position, "known identifier (x, e, pi, or a function name)");
      }
      case TokenKind::LParen: {
        ++pos_;
        ExprPtr inner = expr();
        expect(TokenKind::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(tok.position, "expression");
    }
  }
};

}  // namespace

ExprPtr parse(const std::vector<Token>& tokens) { return Parser(tokens).run(); }

ExprPtr parse_expression(std::string_view source) { return parse(tokenize(source)); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double finite_or_throw(double v, const char* what) {
  if (!std::isfinite(v)) throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

}  // namespace

double eval(const Expr& e, double x) {
  switch (e.kind) {
    case ExprKind::Const:
      return e.value;
    case ExprKind::Var:
      return x;
    case ExprKind::Neg:
      return -eval(*e.lhs, x);
    case ExprKind::Add:
      return finite_or_throw(eval(*e.lhs, x) + eval(*e.rhs, x), "addition");
    case ExprKind::Sub:
      return finite_or_throw(eval(*e.lhs, x) - eval(*e.rhs, x), "subtraction");
    case ExprKind::Mul:
      return finite_or_throw(eval(*e.lhs, x) * eval(*e.rhs, x), "multiplication");
    case ExprKind::Div: {
      const double num = eval(*e.lhs, x);
      const double den = eval(*e.rhs, x);
      if (den == 0.0) throw EvalError("division by zero");
      return finite_or_throw(num / den, "division");
    }
    case ExprKind::Pow: {
      const double base = eval(*e.lhs, x);
      if (e.pow_exponent && e.pow_exponent->den % 2 == 1) {
        // signed real root: sign(base)^p * |base|^(p/q)
        const Rational r = *e.pow_exponent;
        const double magnitude =
            std::pow(std::abs(base), static_cast<double>(r.num) / static_cast<double>(r.den));
        const bool flip = base < 0.0 && (r.num % 2 != 0);
        return finite_or_throw(flip ? -magnitude : magnitude, "power");
      }
      const double exponent = eval(*e.rhs, x);
      if (base < 0.0)
        throw EvalError("negative base with non-real-root exponent");
      return finite_or_throw(std::pow(base, exponent), "power");
    }
    case ExprKind::Call: {
      const double a = eval(*e.lhs, x);
      switch (e.func) {
        case Builtin::Exp: return finite_or_throw(std::exp(a), "exp");
        case Builtin::Ln:
          if (a <= 0.0) throw EvalError("ln of non-positive value");
          return finite_or_throw(std::log(a), "ln");
        case Builtin::Sin: return std::sin(a);
        case Builtin::Cos: return std::cos(a);
        case Builtin::Tan: return finite_or_throw(std::tan(a), "tan");
        case Builtin::Abs: return std::abs(a);
        case Builtin::Sqrt:
          if (a < 0.0) throw EvalError("sqrt of negative value");
          return std::sqrt(a);
        case Builtin::Cbrt: return std::cbrt(a);
      }
      throw EvalError("unknown builtin");
    }
  }
  throw EvalError("unknown node kind");
}

// ---------------------------------------------------------------------------
// Breakpoints

namespace {

struct Affine {
  double slope;
  double intercept;
};

// a*x + b view of a subtree, when it has one.
std::optional<Affine> affine_view(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Const:
      return Affine{0.0, e.value};
    case ExprKind::Var:
      return Affine{1.0, 0.0};
    case ExprKind::Neg: {
      auto a = affine_view(*e.lhs);
      if (a) return Affine{-a->slope, -a->intercept};
      return std::nullopt;
    }
    case ExprKind::Add:
    case ExprKind::Sub: {
      const auto l = affine_view(*e.lhs);
      const auto r = affine_view(*e.rhs);
      if (!l || !r) return std::nullopt;
      const double s = e.kind == ExprKind::Add ? 1.0 : -1.0;
      return Affine{l->slope + s * r->slope, l->intercept + s * r->intercept};
    }
    case ExprKind::Mul: {
      const auto l = affine_view(*e.lhs);
      const auto r = affine_view(*e.rhs);
      if (!l || !r) return std::nullopt;
      if (l->slope == 0.0) return Affine{l->intercept * r->slope, l->intercept * r->intercept};
      if (r->slope == 0.0) return Affine{r->intercept * l->slope, r->intercept * l->intercept};
      return std::nullopt;
    }
    case ExprKind::Div: {
      const auto l = affine_view(*e.lhs);
      const auto r = affine_view(*e.rhs);
      if (!l || !r || r->slope != 0.0 || r->intercept == 0.0) return std::nullopt;
      return Affine{l->slope / r->intercept, l->intercept / r->intercept};
    }
    default:
      return std::nullopt;
  }
}

void collect_breakpoints(const Expr& e, std::vector<double>& out) {
  const bool kink_site = (e.kind == ExprKind::Call && e.func == Builtin::Abs) ||
                         (e.kind == ExprKind::Pow && e.pow_exponent.has_value());
  if (kink_site) {
    if (const auto a = affine_view(*e.lhs); a && a->slope != 0.0) {
      const double root = -a->intercept / a->slope;
      if (root > 0.0 && root < 1.0) out.push_back(root);
    }
  }
  if (e.lhs) collect_breakpoints(*e.lhs, out);
  if (e.rhs) collect_breakpoints(*e.rhs, out);
}

}  // namespace

std::vector<double> breakpoints(const Expr& e) {
  std::vector<double> out;
  collect_breakpoints(e, out);
  std::sort(out.begin(), out.end());
  std::vector<double> dedup;
  for (double v : out)
    if (dedup.empty() || v - dedup.back() > 1e-12) dedup.push_back(v);
  return dedup;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Binding levels: Add/Sub=1, Mul/Div=2, Neg=3, Pow=4, atoms=5. A node is
// parenthesized when its level is below what its position requires; this is
// exactly what keeps the output re-parsing to the same tree.
int level_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub: return 1;
    case ExprKind::Mul:
    case ExprKind::Div: return 2;
    case ExprKind::Neg: return 3;
    case ExprKind::Pow: return 4;
    default: return 5;
  }
}

std::string format_value(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Expr& e, int min_level, std::string& out) {
  const bool parens = level_of(e) < min_level;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::Const:
      if (e.named == NamedConst::E)
        out += 'e';
      else if (e.named == NamedConst::Pi)
        out += "pi";
      else
        out += format_value(e.value);
      break;
    case ExprKind::Var:
      out += 'x';
      break;
    case ExprKind::Neg:
      out += '-';
      print(*e.lhs, 3, out);
      break;
    case ExprKind::Add:
    case ExprKind::Sub:
      print(*e.lhs, 1, out);
      out += e.kind == ExprKind::Add ? '+' : '-';
      print(*e.rhs, 2, out);
      break;
    case ExprKind::Mul:
    case ExprKind::Div:
      print(*e.lhs, 2, out);
      out += e.kind == ExprKind::Mul ? '*' : '/';
      print(*e.rhs, 3, out);
      break;
    case ExprKind::Pow:
      print(*e.lhs, 5, out);
      out += '^';
      print(*e.rhs, 3, out);
      break;
    case ExprKind::Call:
      out += builtin_name(e.func);
      out += '(';
      print(*e.lhs, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Const:
      return a.named == b.named &&
             (a.value == b.value || (std::isnan(a.value) && std::isnan(b.value)));
    case ExprKind::Var:
      return true;
    case ExprKind::Neg:
      return structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Call:
      return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
    case ExprKind::Pow:
      if (a.pow_exponent != b.pow_exponent) return false;
      [[fallthrough]];
    default:
      return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

}  // namespace l2split
