#include "l2split/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "l2split/decomposition.hpp"

namespace l2split::cli {

namespace {

// ---------------------------------------------------------------------------
// JSON emission. Numbers are written with 17 significant digits so every
// value parses back to the identical binary double.

std::string json_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

class JsonWriter {
 public:
  void begin_object() { open('{'); }
  void end_object() { close('}'); }
  void begin_array() { open('['); }
  void end_array() { close(']'); }

  void key(std::string_view k) {
    separate();
    buf_ += json_escape(k);
    buf_ += ':';
    pending_value_ = true;
  }

  void value(double v) { item(json_number(v)); }
  void value(int v) { item(std::to_string(v)); }
  void value(bool v) { item(v ? "true" : "false"); }
  void value(std::string_view v) { item(json_escape(v)); }
  void value(const char* v) { item(json_escape(v)); }  // would otherwise convert to bool
  void null() { item("null"); }

  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
  std::vector<bool> first_;
  bool pending_value_ = false;

  void separate() {
    if (pending_value_) {
      pending_value_ = false;
      return;
    }
    if (!first_.empty()) {
      if (!first_.back()) buf_ += ',';
      first_.back() = false;
    }
  }

  void open(char c) {
    separate();
    buf_ += c;
    first_.push_back(true);
  }

  void close(char c) {
    buf_ += c;
    first_.pop_back();
  }

  void item(const std::string& text) {
    separate();
    buf_ += text;
  }
};

// ---------------------------------------------------------------------------
// Command configuration

enum class Format { Table, Json, Csv };

struct InputSpec {
  bool is_csv = false;
  std::string text;  // expression source or csv path
};

struct CommandContext {
  QuadratureConfig quad;
  std::map<std::string, double> params;
  std::vector<double> extra_breakpoints;
  Format format = Format::Table;
  std::vector<std::string> warnings;
};

double parse_double(const std::string& text, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty() || !std::isfinite(v))
    throw OutOfDomain(std::string("invalid ") + what + ": '" + text + "'");
  return v;
}

std::map<std::string, double> parse_params(const std::vector<std::string>& raw) {
  std::map<std::string, double> params;
  for (const std::string& kv : raw) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw OutOfDomain("--param expects name=value, got '" + kv + "'");
    params[kv.substr(0, eq)] = parse_double(kv.substr(eq + 1), "parameter value");
  }
  return params;
}

std::vector<double> parse_breakpoint_list(const std::string& raw) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= raw.size() && !raw.empty()) {
    std::size_t comma = raw.find(',', pos);
    if (comma == std::string::npos) comma = raw.size();
    out.push_back(parse_double(raw.substr(pos, comma - pos), "breakpoint"));
    pos = comma + 1;
    if (comma == raw.size()) break;
  }
  return out;
}

FunctionHandle load_input(const InputSpec& spec, CommandContext& ctx) {
  FunctionHandle handle = [&] {
    if (spec.is_csv) {
      FromCsvResult r = from_csv(read_csv_file(spec.text), spec.text);
      for (auto& w : r.warnings) ctx.warnings.push_back(spec.text + ": " + w);
      return std::move(r.handle);
    }
    return from_expression(spec.text, ctx.params);
  }();
  if (!ctx.extra_breakpoints.empty()) handle = handle.with_breakpoints(ctx.extra_breakpoints);
  return handle;
}

// slot syntax for two-function commands: an expression, or csv:<path>
InputSpec parse_slot(const std::string& raw) {
  if (raw.rfind("csv:", 0) == 0) return InputSpec{true, raw.substr(4)};
  return InputSpec{false, raw};
}

void write_input(JsonWriter& w, const InputSpec& spec,
                 const std::map<std::string, double>& params) {
  w.begin_object();
  w.key("kind");
  w.value(spec.is_csv ? "csv" : "expression");
  w.key(spec.is_csv ? "path" : "source");
  w.value(spec.text);
  if (!spec.is_csv) {
    w.key("params");
    w.begin_object();
    for (const auto& [k, v] : params) {
      w.key(k);
      w.value(v);
    }
    w.end_object();
  }
  w.end_object();
}

void write_config(JsonWriter& w, const CommandContext& ctx) {
  w.key("config");
  w.begin_object();
  w.key("abs_tol");
  w.value(ctx.quad.abs_tol);
  w.key("rel_tol");
  w.value(ctx.quad.rel_tol);
  w.key("max_subdivisions");
  w.value(ctx.quad.max_subdivisions);
  w.end_object();
}

void write_warnings(JsonWriter& w, const CommandContext& ctx) {
  if (ctx.warnings.empty()) return;
  w.key("warnings");
  w.begin_array();
  for (const auto& msg : ctx.warnings) w.value(msg);
  w.end_array();
}

void write_residuals(JsonWriter& w, const VerificationReport& r) {
  w.begin_object();
  w.key("orthogonality");
  w.value(r.orthogonality);
  w.key("mean_of_Q");
  w.value(r.mean_of_q);
  w.key("idempotence_P");
  w.value(r.idempotence_p);
  w.key("idempotence_Q");
  w.value(r.idempotence_q);
  w.key("cross_PQ");
  w.value(r.cross_pq());
  w.key("pythagoras");
  w.value(r.pythagoras);
  w.key("corollary8");
  w.value(r.mean_of_p_matches);
  w.key("potential_boundary");
  w.value(r.potential_boundary);
  w.key("derivative");
  w.value(r.derivative_residual);
  w.end_object();
}

void write_samples(JsonWriter& w, const SampleSet& samples) {
  w.begin_array();
  for (const SampleRow& row : samples.rows) {
    w.begin_object();
    w.key("x");
    w.value(row.x);
    w.key("y");
    if (row.y)
      w.value(*row.y);
    else
      w.null();
    w.end_object();
  }
  w.end_array();
}

void print_residual_table(std::ostream& out, const VerificationReport& r) {
  auto line = [&out](const char* name, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-22s %.6e", name, v);
    out << buf << "\n";
  };
  out << "residuals:\n";
  line("orthogonality", r.orthogonality);
  line("mean_of_Q", r.mean_of_q);
  line("idempotence_P", r.idempotence_p);
  line("idempotence_Q", r.idempotence_q);
  line("cross_PQ", r.cross_pq());
  line("pythagoras", r.pythagoras);
  line("corollary8", r.mean_of_p_matches);
  line("potential_boundary", r.potential_boundary);
  line("derivative", r.derivative_residual);
}

std::string table_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Commands

int run_decompose(const InputSpec& spec, CommandContext& ctx, int samples, std::ostream& out) {
  FunctionHandle f = load_input(spec, ctx);
  const Decomposition d = decompose(f, ctx.quad);
  const SampleSet q_samples = emit_samples(d.fluctuation, samples);

  SampleSet h_samples;
  for (int i = 0; i < samples; ++i) {
    const double x = static_cast<double>(i) / (samples - 1);
    SampleRow row{x, std::nullopt};
    try {
      row.y = d.potential(x);
    } catch (const Error&) {
      ++h_samples.warning_count;
    }
    h_samples.rows.push_back(row);
  }

  switch (ctx.format) {
    case Format::Json: {
      JsonWriter w;
      w.begin_object();
      w.key("command");
      w.value("decompose");
      w.key("input");
      write_input(w, spec, ctx.params);
      write_config(w, ctx);
      w.key("result");
      w.begin_object();
      w.key("mean");
      w.value(d.mean);
      w.key("q_samples");
      write_samples(w, q_samples);
      w.key("h_samples");
      write_samples(w, h_samples);
      w.key("residuals");
      write_residuals(w, d.residuals);
      w.end_object();
      write_warnings(w, ctx);
      w.end_object();
      out << w.str() << "\n";
      break;
    }
    case Format::Csv: {
      out << "x,q,h\n";
      for (std::size_t i = 0; i < q_samples.rows.size(); ++i) {
        out << json_number(q_samples.rows[i].x) << ",";
        if (q_samples.rows[i].y) out << json_number(*q_samples.rows[i].y);
        out << ",";
        if (h_samples.rows[i].y) out << json_number(*h_samples.rows[i].y);
        out << "\n";
      }
      break;
    }
    case Format::Table: {
      const std::string mean_text = d.mean < 0.0 ? "(" + table_number(d.mean) + ")"
                                                 : table_number(d.mean);
      out << "f(x) = " << f.label() << "\n";
      out << "mean (P f)          = " << table_number(d.mean) << "\n";
      out << "fluctuation (Q f)   = f - " << mean_text << "\n";
      out << "potential h(1)      = " << table_number(d.potential(1.0)) << "\n";
      print_residual_table(out, d.residuals);
      break;
    }
  }
  return 0;
}

int run_angle_like(const char* command, const InputSpec& fspec, const InputSpec& gspec,
                   CommandContext& ctx, bool inner_only, std::ostream& out) {
  FunctionHandle f = load_input(fspec, ctx);
  FunctionHandle g = load_input(gspec, ctx);

  if (inner_only) {
    const double value = inner_product(f, g, ctx.quad);
    if (ctx.format == Format::Json) {
      JsonWriter w;
      w.begin_object();
      w.key("command");
      w.value(command);
      w.key("input");
      w.begin_object();
      w.key("f");
      write_input(w, fspec, ctx.params);
      w.key("g");
      write_input(w, gspec, ctx.params);
      w.end_object();
      write_config(w, ctx);
      w.key("result");
      w.begin_object();
      w.key("value");
      w.value(value);
      w.end_object();
      write_warnings(w, ctx);
      w.end_object();
      out << w.str() << "\n";
    } else if (ctx.format == Format::Csv) {
      out << "key,value\ninner," << json_number(value) << "\n";
    } else {
      out << "<f,g> = " << table_number(value) << "\n";
    }
    return 0;
  }

  const AngleReport report = angle(f, g, ctx.quad);
  const double degrees = report.theta_radians * 180.0 / M_PI;
  switch (ctx.format) {
    case Format::Json: {
      JsonWriter w;
      w.begin_object();
      w.key("command");
      w.value(command);
      w.key("input");
      w.begin_object();
      w.key("f");
      write_input(w, fspec, ctx.params);
      w.key("g");
      write_input(w, gspec, ctx.params);
      w.end_object();
      write_config(w, ctx);
      w.key("result");
      w.begin_object();
      w.key("inner");
      w.value(report.inner);
      w.key("norm_f");
      w.value(report.norm_f);
      w.key("norm_g");
      w.value(report.norm_g);
      w.key("cosine");
      w.value(report.cosine);
      w.key("theta_radians");
      w.value(report.theta_radians);
      w.key("theta_degrees");
      w.value(degrees);
      w.key("clamp_applied");
      w.value(report.clamp_applied);
      w.end_object();
      write_warnings(w, ctx);
      w.end_object();
      out << w.str() << "\n";
      break;
    }
    case Format::Csv:
      out << "key,value\n";
      out << "inner," << json_number(report.inner) << "\n";
      out << "norm_f," << json_number(report.norm_f) << "\n";
      out << "norm_g," << json_number(report.norm_g) << "\n";
      out << "cosine," << json_number(report.cosine) << "\n";
      out << "theta_radians," << json_number(report.theta_radians) << "\n";
      out << "theta_degrees," << json_number(degrees) << "\n";
      break;
    case Format::Table:
      out << "<f,g>      = " << table_number(report.inner) << "\n";
      out << "||f||      = " << table_number(report.norm_f) << "\n";
      out << "||g||      = " << table_number(report.norm_g) << "\n";
      out << "cos(theta) = " << table_number(report.cosine)
          << (report.clamp_applied ? "  (clamped)" : "") << "\n";
      out << "theta      = " << table_number(report.theta_radians) << " rad ("
          << table_number(degrees) << " deg)\n";
      break;
  }
  return 0;
}

int run_norm(const InputSpec& spec, CommandContext& ctx, std::ostream& out) {
  FunctionHandle f = load_input(spec, ctx);
  const double value = l2_norm(f, ctx.quad);
  if (ctx.format == Format::Json) {
    JsonWriter w;
    w.begin_object();
    w.key("command");
    w.value("norm");
    w.key("input");
    write_input(w, spec, ctx.params);
    write_config(w, ctx);
    w.key("result");
    w.begin_object();
    w.key("value");
    w.value(value);
    w.end_object();
    write_warnings(w, ctx);
    w.end_object();
    out << w.str() << "\n";
  } else if (ctx.format == Format::Csv) {
    out << "key,value\nnorm," << json_number(value) << "\n";
  } else {
    out << "||f|| = " << table_number(value) << "\n";
  }
  return 0;
}

int run_verify(const InputSpec& spec, CommandContext& ctx, int probes, std::ostream& out) {
  FunctionHandle f = load_input(spec, ctx);
  const VerificationReport report = verify(f, ctx.quad, probes);
  switch (ctx.format) {
    case Format::Json: {
      JsonWriter w;
      w.begin_object();
      w.key("command");
      w.value("verify");
      w.key("input");
      write_input(w, spec, ctx.params);
      write_config(w, ctx);
      w.key("result");
      w.begin_object();
      w.key("residuals");
      write_residuals(w, report);
      w.key("zero_mean_case_checked");
      w.value(report.zero_mean_case_checked);
      w.key("zero_mean_case_ok");
      w.value(report.zero_mean_case_ok);
      w.end_object();
      write_warnings(w, ctx);
      w.end_object();
      out << w.str() << "\n";
      break;
    }
    case Format::Csv:
      out << "residual,value\n";
      out << "orthogonality," << json_number(report.orthogonality) << "\n";
      out << "mean_of_Q," << json_number(report.mean_of_q) << "\n";
      out << "idempotence_P," << json_number(report.idempotence_p) << "\n";
      out << "idempotence_Q," << json_number(report.idempotence_q) << "\n";
      out << "cross_PQ," << json_number(report.cross_pq()) << "\n";
      out << "pythagoras," << json_number(report.pythagoras) << "\n";
      out << "corollary8," << json_number(report.mean_of_p_matches) << "\n";
      out << "potential_boundary," << json_number(report.potential_boundary) << "\n";
      out << "derivative," << json_number(report.derivative_residual) << "\n";
      break;
    case Format::Table:
      out << "f(x) = " << f.label() << "\n";
      print_residual_table(out, report);
      if (report.zero_mean_case_checked)
        out << "P f vanishes; mean-zero consequence "
            << (report.zero_mean_case_ok ? "holds" : "VIOLATED") << "\n";
      break;
  }
  return 0;
}

int run_zeros(const InputSpec& spec, CommandContext& ctx, int scan, std::ostream& out) {
  FunctionHandle f = load_input(spec, ctx);
  const ZeroCrossingReport report = zero_crossings(f, ctx.quad, scan);
  switch (ctx.format) {
    case Format::Json: {
      JsonWriter w;
      w.begin_object();
      w.key("command");
      w.value("zeros");
      w.key("input");
      write_input(w, spec, ctx.params);
      write_config(w, ctx);
      w.key("result");
      w.begin_object();
      w.key("zeros");
      w.begin_array();
      for (const ZeroCrossing& z : report.zeros) {
        w.begin_object();
        w.key("x0");
        w.value(z.x0);
        w.key("left_integral");
        w.value(z.left_integral);
        w.key("right_integral");
        w.value(z.right_integral);
        w.key("sum");
        w.value(z.sum);
        w.end_object();
      }
      w.end_array();
      w.end_object();
      write_warnings(w, ctx);
      w.end_object();
      out << w.str() << "\n";
      break;
    }
    case Format::Csv:
      out << "x0,left_integral,right_integral,sum\n";
      for (const ZeroCrossing& z : report.zeros)
        out << json_number(z.x0) << "," << json_number(z.left_integral) << ","
            << json_number(z.right_integral) << "," << json_number(z.sum) << "\n";
      break;
    case Format::Table:
      if (!report.sign_change_found) {
        out << "no sign change of Q f found (Q f may be identically zero)\n";
        break;
      }
      out << "zeros of Q f:\n";
      for (const ZeroCrossing& z : report.zeros)
        out << "  x0 = " << table_number(z.x0)
            << "  left = " << table_number(z.left_integral)
            << "  right = " << table_number(z.right_integral)
            << "  sum = " << table_number(z.sum) << "\n";
      break;
  }
  return 0;
}

constexpr const char* kGrammarHelp =
    "Expression grammar:\n"
    "  expr    := term (('+'|'-') term)*\n"
    "  term    := factor (('*'|'/') factor)*\n"
    "  factor  := '-' factor | power\n"
    "  power   := primary ('^' factor)?\n"
    "  primary := number | 'x' | 'e' | 'pi' | func '(' expr ')' | '(' expr ')'\n"
    "  func    := exp | ln | sin | cos | tan | abs | sqrt | cbrt\n"
    "'^' is right-associative and binds tighter than an outside unary minus\n"
    "(-x^2 is -(x^2)). A literal number or parenthesized quotient exponent\n"
    "such as (x-1/2)^(2/3) keeps its rational p/q: odd q uses the signed\n"
    "real root, so the value exists on all of [0,1].\n"
    "\n"
    "--param g=2 substitutes the whole identifier g before parsing.\n"
    "CSV input: two numeric columns x,y; optional header row.\n"
    "Exit status: 0 success, 1 user error, 2 numerical failure.\n";

}  // namespace

SampleSet emit_samples(const FunctionHandle& f, int n) {
  if (n < 2) throw OutOfDomain("emit_samples: need at least 2 points");
  SampleSet set;
  for (int i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / (n - 1);
    SampleRow row{x, std::nullopt};
    try {
      row.y = f.value_at(x);
    } catch (const Error&) {
      ++set.warning_count;
    }
    set.rows.push_back(row);
  }
  return set;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Orthogonal mean/fluctuation decomposition of L2[0,1] functions"};
  app.footer(kGrammarHelp);
  app.require_subcommand(1);

  struct Options {
    std::string expr;
    std::string csv;
    std::string f_slot;
    std::string g_slot;
    std::vector<std::string> params;
    double tol = 1e-10;
    int samples = 201;
    int probes = 50;
    int scan = 1024;
    std::string breakpoints;
    std::string format = "table";
  } opt;

  auto add_common = [&opt](CLI::App* sub, bool single_input) {
    if (single_input) {
      auto* expr = sub->add_option("--expr", opt.expr, "closed-form expression in x");
      auto* csv = sub->add_option("--csv", opt.csv, "CSV file with x,y samples");
      expr->excludes(csv);
    }
    sub->add_option("--param", opt.params, "parameter substitution name=value")
        ->take_all();
    sub->add_option("--tol", opt.tol, "quadrature tolerance (absolute and relative)");
    sub->add_option("--breakpoints", opt.breakpoints,
                    "extra breakpoints a,b,... inside (0,1)");
    sub->add_option("--format", opt.format, "output format: table, json, or csv")
        ->check(CLI::IsMember({"table", "json", "csv"}));
  };

  CLI::App* decompose_cmd = app.add_subcommand("decompose", "split f into mean + fluctuation");
  add_common(decompose_cmd, true);
  decompose_cmd->add_option("--samples", opt.samples, "output grid size (>= 2)");

  CLI::App* angle_cmd = app.add_subcommand("angle", "angle between two functions");
  angle_cmd->add_option("--f", opt.f_slot, "first function: expression or csv:<path>")
      ->required();
  angle_cmd->add_option("--g", opt.g_slot, "second function: expression or csv:<path>")
      ->required();
  add_common(angle_cmd, false);

  CLI::App* verify_cmd = app.add_subcommand("verify", "residuals of the projection identities");
  add_common(verify_cmd, true);
  verify_cmd->add_option("--probes", opt.probes, "interior probe points (>= 2)");

  CLI::App* zeros_cmd = app.add_subcommand("zeros", "interior zeros of Q f and split integrals");
  add_common(zeros_cmd, true);
  zeros_cmd->add_option("--scan", opt.scan, "scan grid size (>= 16)");

  CLI::App* inner_cmd = app.add_subcommand("inner", "inner product <f,g>");
  inner_cmd->add_option("--f", opt.f_slot, "first function: expression or csv:<path>")
      ->required();
  inner_cmd->add_option("--g", opt.g_slot, "second function: expression or csv:<path>")
      ->required();
  add_common(inner_cmd, false);

  CLI::App* norm_cmd = app.add_subcommand("norm", "L2 norm of f");
  norm_cmd->add_option("--f", opt.f_slot, "function: expression or csv:<path>")->required();
  add_common(norm_cmd, false);

  std::vector<const char*> argv;
  argv.push_back("l2split");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    CommandContext ctx;
    ctx.quad.abs_tol = opt.tol;
    ctx.quad.rel_tol = opt.tol;
    ctx.params = parse_params(opt.params);
    ctx.extra_breakpoints = parse_breakpoint_list(opt.breakpoints);
    if (opt.format == "json")
      ctx.format = Format::Json;
    else if (opt.format == "csv")
      ctx.format = Format::Csv;

    auto single_input = [&opt]() {
      if (opt.expr.empty() == opt.csv.empty())
        throw OutOfDomain("exactly one of --expr or --csv is required");
      return opt.expr.empty() ? InputSpec{true, opt.csv} : InputSpec{false, opt.expr};
    };

    int status = 0;
    if (decompose_cmd->parsed()) {
      if (opt.samples < 2) throw OutOfDomain("--samples must be >= 2");
      status = run_decompose(single_input(), ctx, opt.samples, out);
    } else if (angle_cmd->parsed()) {
      status = run_angle_like("angle", parse_slot(opt.f_slot), parse_slot(opt.g_slot), ctx,
                              false, out);
    } else if (verify_cmd->parsed()) {
      status = run_verify(single_input(), ctx, opt.probes, out);
    } else if (zeros_cmd->parsed()) {
      status = run_zeros(single_input(), ctx, opt.scan, out);
    } else if (inner_cmd->parsed()) {
      status = run_angle_like("inner", parse_slot(opt.f_slot), parse_slot(opt.g_slot), ctx,
                              true, out);
    } else if (norm_cmd->parsed()) {
      status = run_norm(parse_slot(opt.f_slot), ctx, out);
    }
    for (const std::string& w : ctx.warnings) err << "warning: " << w << "\n";
    return status;
  } catch (const NotConverged& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const NegativeNorm& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace l2split::cli
