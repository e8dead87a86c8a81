#include "cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stablefit/data_io.hpp"
#include "stablefit/errors.hpp"
#include "stablefit/estimation.hpp"
#include "stablefit/gof.hpp"
#include "stablefit/report.hpp"
#include "stablefit/sampling.hpp"

namespace stablefit::cli {

namespace {

enum class Format { table, structured };

struct Config {
  std::string input;
  CsvSchema schema;
  std::vector<std::string> methods;
  std::string stable_method = "mle";
  Format format = Format::table;
  std::string out_path;
  double alpha = 2.0;
  double beta = 0.0;
  double gamma = 1.0;
  double delta = 0.0;
  std::size_t n = 1000;
  std::uint64_t seed = 1;
  double rel_tol = EvalOptions{}.rel_tol;
  double abs_tol = EvalOptions{}.abs_tol;
};

int exit_status(const std::exception& e) {
  if (dynamic_cast<const FileError*>(&e) || dynamic_cast<const DomainError*>(&e)) return kExitUsage;
  if (dynamic_cast<const ConvergenceError*>(&e)) return kExitConvergence;
  if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const EmptyFileError*>(&e) || dynamic_cast<const InsufficientDataError*>(&e) ||
      dynamic_cast<const DegenerateDataError*>(&e) || dynamic_cast<const TableError*>(&e)) {
    return kExitData;
  }
  return kExitOther;
}

std::string error_message(const std::exception& e) {
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    return "row " + std::to_string(p->row()) + ": " + p->reason();
  }
  return e.what();
}

EvalOptions eval_options(const Config& c) {
  EvalOptions o;
  o.rel_tol = c.rel_tol;
  o.abs_tol = c.abs_tol;
  validate(o);
  return o;
}

ReturnSeries load_returns(const Config& c) { return log_returns(load_price_csv(c.input, c.schema)); }

FitMethod parse_method(const std::string& name) {
  if (name == "mle") return FitMethod::mle;
  if (name == "quantile") return FitMethod::quantile;
  if (name == "ecf") return FitMethod::ecf;
  throw DomainError("method", "unknown method \"" + name + "\" (expected mle, quantile or ecf)");
}

FitResult run_fit(FitMethod m, std::span<const double> x, const EvalOptions& eval) {
  switch (m) {
    case FitMethod::mle: {
      MleOptions o;
      o.eval = eval;
      return fit_mle(x, o);
    }
    case FitMethod::quantile:
      return fit_quantile(x);
    case FitMethod::ecf:
      return fit_ecf(x);
  }
  throw DomainError("method", "unknown method");
}

// Writes to --out when given, else to the supplied stream.
void emit(const Config& c, std::ostream& out, const std::string& text) {
  if (c.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out_path, std::ios::binary);
  if (!f) throw FileError(c.out_path);
  f << text;
}

int cmd_summary(const Config& c, std::ostream& out) {
  const auto series = load_returns(c);
  const auto stats = summary_stats(series);
  emit(c, out, c.format == Format::table ? render_summary_table(series, stats) : summary_json(series, stats));
  return kExitOk;
}

int cmd_fit(const Config& c, std::ostream& out, std::ostream& err) {
  const auto eval = eval_options(c);
  std::vector<FitMethod> methods;
  for (const auto& m : c.methods) methods.push_back(parse_method(m));
  if (methods.empty()) methods = {FitMethod::mle, FitMethod::quantile, FitMethod::ecf};
  const auto series = load_returns(c);
  std::vector<FitRow> rows;
  int status = kExitOk;
  for (FitMethod m : methods) {
    FitRow row;
    row.method = m;
    try {
      row.fit = run_fit(m, series.returns, eval);
    } catch (const Error& e) {
      row.error = error_message(e);
      err << "error: " << method_name(m) << ": " << row.error << '\n';
      if (status == kExitOk) status = exit_status(e);
    }
    rows.push_back(std::move(row));
  }
  emit(c, out, c.format == Format::table ? render_fit_table(series, rows) : fit_json(series, rows));
  return status;
}

int cmd_gof(const Config& c, std::ostream& out) {
  const auto eval = eval_options(c);
  const FitMethod m = parse_method(c.stable_method);
  const auto series = load_returns(c);
  const auto stable = run_fit(m, series.returns, eval);
  const auto t = fit_student_t(series.returns);
  const auto report = compare_distributions(series, stable, t);
  emit(c, out, c.format == Format::table ? render_gof_table(series, report) : gof_json(series, report));
  return kExitOk;
}

int cmd_simulate(const Config& c, std::ostream& out) {
  const StableParams p{c.alpha, c.beta, c.gamma, c.delta, Parameterization::S1};
  validate(p);
  const auto draws = sample(p, c.n, c.seed);
  std::string text;
  text.reserve(draws.size() * 24);
  char buf[32];
  for (double x : draws) {
    std::snprintf(buf, sizeof buf, "%.17g\n", x);
    text += buf;
  }
  emit(c, out, text);
  return kExitOk;
}

void add_input_flags(CLI::App* sub, Config& c) {
  sub->add_option("--input", c.input, "CSV file with a header row, ISO dates and closing prices")->required();
  sub->add_option("--date-col", c.schema.date_column, "Name of the date column")->capture_default_str();
  sub->add_option("--close-col", c.schema.close_column, "Name of the closing-price column")->capture_default_str();
}

void add_output_flags(CLI::App* sub, Config& c) {
  sub->add_option("--format", c.format, "Output format: table (4 significant figures) or structured (JSON)")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"table", Format::table},
                                                                        {"structured", Format::structured}})
                     .description(""))
      ->option_text("table|structured [table]");
  sub->add_option("--out", c.out_path, "Write output to PATH instead of standard output");
}

void add_tolerance_flags(CLI::App* sub, Config& c) {
  sub->add_option("--rel-tol", c.rel_tol, "Relative accuracy of density and CDF evaluation")->capture_default_str();
  sub->add_option("--abs-tol", c.abs_tol, "Absolute accuracy floor of CDF evaluation")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Fit alpha-stable laws to asset returns and compare them with Cauchy, Student-t and Levy fits.",
               "stablefit"};
  app.footer(
      "Environment:\n  STABLEFIT_MCCULLOCH_TABLES  path of the McCulloch table asset\n"
      "  STABLEFIT_ISA               scalar or avx2, overrides kernel selection\n"
      "Exit status: 0 success, 2 usage or invalid parameters (including unreadable input),\n"
      "  3 data errors, 4 convergence failures, 1 anything else.");
  app.require_subcommand(1);

  auto* summary = app.add_subcommand("summary", "Summary statistics of the log returns");
  add_input_flags(summary, c);
  add_output_flags(summary, c);

  auto* fit = app.add_subcommand("fit", "Estimate stable parameters (S1) with one or more methods");
  add_input_flags(fit, c);
  fit->add_option("--method", c.methods, "Comma-separated subset of mle, quantile, ecf (default: all)")
      ->delimiter(',');
  add_output_flags(fit, c);
  add_tolerance_flags(fit, c);

  auto* gof = app.add_subcommand("gof", "Kolmogorov-Smirnov comparison of stable, Cauchy, Student-t and Levy fits");
  add_input_flags(gof, c);
  gof->add_option("--method", c.stable_method, "Estimator for the stable column: mle, quantile or ecf")
      ->capture_default_str();
  add_output_flags(gof, c);
  add_tolerance_flags(gof, c);

  auto* simulate = app.add_subcommand("simulate", "Draw a stable sample (S1 parameters), one value per line");
  simulate->add_option("--alpha", c.alpha, "Tail index, 0 < alpha <= 2")->capture_default_str();
  simulate->add_option("--beta", c.beta, "Skewness, -1 <= beta <= 1")->capture_default_str();
  simulate->add_option("--gamma", c.gamma, "Scale, > 0")->capture_default_str();
  simulate->add_option("--delta", c.delta, "Location")->capture_default_str();
  simulate->add_option("--n", c.n, "Number of draws")->capture_default_str();
  simulate->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  simulate->add_option("--out", c.out_path, "Write output to PATH instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    if (!app.get_subcommands().empty()) {
      err << "run 'stablefit " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
    } else {
      err << "run 'stablefit --help' for usage\n";
    }
    return kExitUsage;
  }

  try {
    if (summary->parsed()) return cmd_summary(c, out);
    if (fit->parsed()) return cmd_fit(c, out, err);
    if (gof->parsed()) return cmd_gof(c, out);
    if (simulate->parsed()) return cmd_simulate(c, out);
  } catch (const std::exception& e) {
    err << "error: " << error_message(e) << '\n';
    return exit_status(e);
  }
  return kExitUsage;
}

}  // namespace stablefit::cli
