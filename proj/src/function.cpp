#include "l2split/function.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace l2split {

namespace {

constexpr double kDedupTol = 1e-12;

std::vector<double> sorted_unique_interior(std::vector<double> pts) {
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double v : pts) {
    if (v <= 0.0 || v >= 1.0) continue;
    if (out.empty() || v - out.back() > kDedupTol) out.push_back(v);
  }
  return out;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

FunctionHandle::FunctionHandle(Body body, std::vector<double> breakpoints, std::string label)
    : body_(std::move(body)),
      breakpoints_(sorted_unique_interior(std::move(breakpoints))),
      label_(std::move(label)) {}

double FunctionHandle::value_at(double x) const {
  if (!(x >= 0.0 && x <= 1.0))
    throw OutOfDomain("value_at: x = " + std::to_string(x) + " outside [0,1]");
  struct Visitor {
    double x;
    double operator()(const ClosedForm& c) const { return eval(*c.expr, x); }
    double operator()(const Sampled& s) const {
      const auto& xs = s.grid->xs;
      const auto& ys = s.grid->ys;
      if (x >= xs.back()) return ys.back();
      // panel index i with xs[i] <= x < xs[i+1]; left-endpoint hits are exact
      const auto it = std::upper_bound(xs.begin(), xs.end(), x);
      const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
      const double t = x - xs[i];
      return ys[i] + t * (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    }
    double operator()(const Shifted& s) const { return s.inner->value_at(x) + s.offset; }
    double operator()(const Scaled& s) const { return s.inner->value_at(x) * s.factor; }
    double operator()(const Sum& s) const {
      return s.left->value_at(x) + s.right->value_at(x);
    }
  };
  return std::visit(Visitor{x}, body_);
}

FunctionHandle FunctionHandle::with_breakpoints(const std::vector<double>& extra) const {
  return FunctionHandle(body_, merged_breakpoints(*this, extra), label_);
}

FunctionHandle constant(double value) {
  return FunctionHandle(FunctionHandle::ClosedForm{make_const(value)}, {},
                        format_shortest(value));
}

FunctionHandle from_ast(ExprPtr expr, std::string label) {
  std::vector<double> pts = breakpoints(*expr);
  return FunctionHandle(FunctionHandle::ClosedForm{std::move(expr)}, std::move(pts),
                        std::move(label));
}

std::string substitute_parameters(std::string_view source,
                                  const std::map<std::string, double>& substitutions) {
  static const char* kReserved[] = {"x", "e", "pi", "exp", "ln", "sin", "cos",
                                    "tan", "abs", "sqrt", "cbrt"};
  for (const auto& [name, value] : substitutions) {
    (void)value;
    if (name.empty()) throw OutOfDomain("empty parameter name");
    for (const char* r : kReserved)
      if (name == r) throw OutOfDomain("parameter name '" + name + "' is reserved");
  }

  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  std::string out;
  std::size_t i = 0;
  while (i < source.size()) {
    const char c = source[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < source.size() && ident_char(source[j])) ++j;
      const std::string word(source.substr(i, j - i));
      const auto it = substitutions.find(word);
      if (it != substitutions.end())
        out += "(" + format_shortest(it->second) + ")";
      else
        out += word;
      i = j;
    } else {
      out += c;
      ++i;
    }
  }
  return out;
}

FunctionHandle from_expression(std::string_view source,
                               const std::map<std::string, double>& substitutions) {
  const std::string substituted = substitute_parameters(source, substitutions);
  return from_ast(parse_expression(substituted), std::string(source));
}

FromCsvResult from_csv(std::vector<CsvRow> rows, std::string label) {
  if (rows.size() < 2) throw IngestError("need at least 2 rows, got " + std::to_string(rows.size()));
  for (const CsvRow& r : rows) {
    if (!std::isfinite(r.x) || !std::isfinite(r.y))
      throw IngestError("non-finite value in row");
    if (r.x < 0.0 || r.x > 1.0)
      throw IngestError("abscissa " + std::to_string(r.x) + " outside [0,1]");
  }
  std::sort(rows.begin(), rows.end(), [](const CsvRow& a, const CsvRow& b) { return a.x < b.x; });
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i].x == rows[i - 1].x)
      throw IngestError("duplicate abscissa " + std::to_string(rows[i].x));

  std::vector<std::string> warnings;
  if (rows.front().x > 0.0) {
    warnings.push_back("first sample at x=" + format_shortest(rows.front().x) +
                       "; extended to x=0 with constant value");
    rows.insert(rows.begin(), CsvRow{0.0, rows.front().y});
  }
  if (rows.back().x < 1.0) {
    warnings.push_back("last sample at x=" + format_shortest(rows.back().x) +
                       "; extended to x=1 with constant value");
    rows.push_back(CsvRow{1.0, rows.back().y});
  }

  auto grid = std::make_shared<SampledGrid>();
  grid->xs.reserve(rows.size());
  grid->ys.reserve(rows.size());
  for (const CsvRow& r : rows) {
    grid->xs.push_back(r.x);
    grid->ys.push_back(r.y);
  }
  std::vector<double> knots(grid->xs.begin() + 1, grid->xs.end() - 1);
  FunctionHandle handle(FunctionHandle::Sampled{std::move(grid)}, std::move(knots),
                        std::move(label));
  return FromCsvResult{std::move(handle), std::move(warnings)};
}

std::vector<CsvRow> parse_csv(std::string_view text) {
  std::vector<CsvRow> rows;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto parse_field = [](std::string_view field, double& out) {
    const std::string s(field);
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    // tolerate surrounding spaces
    while (end && *end == ' ') ++end;
    return end == s.c_str() + s.size() && !s.empty();
  };
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    // strip leading spaces
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty()) {
      if (pos > text.size()) break;
      continue;
    }
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos)
      throw IngestError("line " + std::to_string(line_no) + ": expected two comma-separated fields");
    double x = 0.0, y = 0.0;
    if (!parse_field(line.substr(0, comma), x)) {
      if (line_no == 1 && rows.empty()) continue;  // header row
      throw IngestError("line " + std::to_string(line_no) + ": non-numeric x field");
    }
    if (!parse_field(line.substr(comma + 1), y))
      throw IngestError("line " + std::to_string(line_no) + ": non-numeric y field");
    rows.push_back(CsvRow{x, y});
    if (pos > text.size()) break;
  }
  return rows;
}

std::vector<CsvRow> read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str());
}

FunctionHandle shifted(FunctionHandle f, double offset) {
  std::vector<double> pts = f.breakpoints();
  std::string label = f.label() + (offset < 0.0 ? "" : "+") + format_shortest(offset);
  auto inner = std::make_shared<const FunctionHandle>(std::move(f));
  return FunctionHandle(FunctionHandle::Shifted{std::move(inner), offset}, std::move(pts),
                        std::move(label));
}

FunctionHandle scaled(FunctionHandle f, double factor) {
  std::vector<double> pts = f.breakpoints();
  std::string label = format_shortest(factor) + "*(" + f.label() + ")";
  auto inner = std::make_shared<const FunctionHandle>(std::move(f));
  return FunctionHandle(FunctionHandle::Scaled{std::move(inner), factor}, std::move(pts),
                        std::move(label));
}

FunctionHandle sum(FunctionHandle f, FunctionHandle g) {
  std::vector<double> pts = f.breakpoints();
  pts.insert(pts.end(), g.breakpoints().begin(), g.breakpoints().end());
  std::string label = f.label() + " + " + g.label();
  auto left = std::make_shared<const FunctionHandle>(std::move(f));
  auto right = std::make_shared<const FunctionHandle>(std::move(g));
  return FunctionHandle(FunctionHandle::Sum{std::move(left), std::move(right)}, std::move(pts),
                        std::move(label));
}

std::vector<double> merged_breakpoints(const FunctionHandle& f,
                                       const std::vector<double>& extra) {
  for (double v : extra)
    if (!(v > 0.0 && v < 1.0))
      throw OutOfDomain("breakpoint " + std::to_string(v) + " outside (0,1)");
  std::vector<double> all = f.breakpoints();
  all.insert(all.end(), extra.begin(), extra.end());
  return sorted_unique_interior(std::move(all));
}

bool is_piecewise_linear(const FunctionHandle& f) {
  struct Visitor {
    bool operator()(const FunctionHandle::ClosedForm&) const { return false; }
    bool operator()(const FunctionHandle::Sampled&) const { return true; }
    bool operator()(const FunctionHandle::Shifted& s) const {
      return is_piecewise_linear(*s.inner);
    }
    bool operator()(const FunctionHandle::Scaled& s) const {
      return is_piecewise_linear(*s.inner);
    }
    bool operator()(const FunctionHandle::Sum& s) const {
      return is_piecewise_linear(*s.left) && is_piecewise_linear(*s.right);
    }
  };
  return std::visit(Visitor{}, f.body());
}

}  // namespace l2split
