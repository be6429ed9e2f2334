#pragma once

// Command-line front end: decompose / angle / verify / zeros / inner / norm
// over expression or CSV input, reporting as a table, JSON, or plot-ready
// CSV. Exit status: 0 success, 1 user error (parse/ingest/usage), 2
// numerical failure (quadrature did not converge).

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "l2split/function.hpp"

namespace l2split::cli {

struct SampleRow {
  double x;
  std::optional<double> y;  // empty when evaluation failed at x
};

struct SampleSet {
  std::vector<SampleRow> rows;
  int warning_count = 0;  // evaluation failures
};

/// Evaluate f on the uniform grid x_i = i/(n-1), n >= 2. Evaluation errors
/// leave the y field empty and bump the warning count; never fatal.
SampleSet emit_samples(const FunctionHandle& f, int n);

/// Run one command. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace l2split::cli
