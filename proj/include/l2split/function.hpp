#pragma once

// Unified evaluable function over [0,1]: closed-form (AST-backed), sampled
// grid (CSV-ingested, linear interpolation), and pointwise arithmetic
// combinations. Every handle carries sorted interior breakpoints so the
// quadrature engine can split panels at kinks and grid knots.
//
// Handles are immutable after construction and cheap to copy; evaluation is
// safe from multiple threads.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "l2split/expr.hpp"

namespace l2split {

/// Piecewise-linear samples on [0,1]: xs strictly increasing with endpoints
/// exactly 0 and 1, ys finite, length >= 2.
struct SampledGrid {
  std::vector<double> xs;
  std::vector<double> ys;
};

struct CsvRow {
  double x;
  double y;
};

class FunctionHandle {
 public:
  struct ClosedForm {
    ExprPtr expr;
  };
  struct Sampled {
    std::shared_ptr<const SampledGrid> grid;
  };
  struct Shifted {
    std::shared_ptr<const FunctionHandle> inner;
    double offset;
  };
  struct Scaled {
    std::shared_ptr<const FunctionHandle> inner;
    double factor;
  };
  struct Sum {
    std::shared_ptr<const FunctionHandle> left;
    std::shared_ptr<const FunctionHandle> right;
  };
  using Body = std::variant<ClosedForm, Sampled, Shifted, Scaled, Sum>;

  FunctionHandle(Body body, std::vector<double> breakpoints, std::string label);

  /// Evaluate at x in [0,1]. Throws OutOfDomain outside the interval and
  /// propagates EvalError per point.
  double value_at(double x) const;

  const Body& body() const { return body_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::string& label() const { return label_; }

  /// Copy of this handle with extra breakpoints merged in.
  FunctionHandle with_breakpoints(const std::vector<double>& extra) const;

 private:
  Body body_;
  std::vector<double> breakpoints_;  // sorted, unique, strictly inside (0,1)
  std::string label_;
};

/// Constant function c on [0,1].
FunctionHandle constant(double value);

/// Wrap an already-parsed expression.
FunctionHandle from_ast(ExprPtr expr, std::string label);

/// Substitute parameter identifiers (whole-word) by their values, then
/// parse. Values are spliced in parenthesized shortest-round-trip form, so
/// "exp(g*x)" with g=2 parses as exp((2)*x). Reserved names (x, e, pi,
/// function names) are rejected with OutOfDomain.
FunctionHandle from_expression(std::string_view source,
                               const std::map<std::string, double>& substitutions = {});

/// The text-level substitution used by from_expression, exposed for the CLI.
std::string substitute_parameters(std::string_view source,
                                  const std::map<std::string, double>& substitutions);

struct FromCsvResult {
  FunctionHandle handle;
  std::vector<std::string> warnings;
};

/// Build a sampled handle from (x, y) rows. Rows are sorted by x; duplicate
/// abscissae, non-finite values, fewer than 2 rows, or data outside [0,1]
/// raise IngestError. Partial coverage is completed by constant extension to
/// the endpoints, with a warning recorded per side.
FromCsvResult from_csv(std::vector<CsvRow> rows, std::string label = "csv");

/// Parse two-column x,y CSV text: comma separator, '.' decimal point, one
/// optional header row (detected when the first field is non-numeric).
std::vector<CsvRow> parse_csv(std::string_view text);

/// Read and parse a CSV file; IngestError when unreadable.
std::vector<CsvRow> read_csv_file(const std::string& path);

/// f + c, preserving f's breakpoints.
FunctionHandle shifted(FunctionHandle f, double offset);

/// k * f, preserving f's breakpoints.
FunctionHandle scaled(FunctionHandle f, double factor);

/// f + g with breakpoints merged.
FunctionHandle sum(FunctionHandle f, FunctionHandle g);

/// Union of the handle's intrinsic breakpoints (grid knots for sampled
/// bodies) and extra points, sorted and deduplicated to 1e-12. Throws
/// OutOfDomain when any extra point lies outside (0,1).
std::vector<double> merged_breakpoints(const FunctionHandle& f,
                                       const std::vector<double>& extra);

/// True when the handle is piecewise linear between its breakpoints (any
/// shift/scale/sum of sampled grids); such integrands integrate exactly
/// panel-by-panel with the trapezoid rule.
bool is_piecewise_linear(const FunctionHandle& f);

}  // namespace l2split
