#include "elastica/cli.hpp"

#include <fmt/format.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>

#include "CLI11.hpp"
#include "elastica/analysis.hpp"
#include "elastica/discrete_oracle.hpp"
#include "elastica/io.hpp"

namespace elastica::cli {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json, Svg };

struct RunConfig {
  double l = kUnset;
  double L = kUnset;
  Family family = Family::Hat;
  int n = 0;
  Sign sign = Sign::Plus;
  long samples = 1001;
  std::string output_path = "-";
  std::optional<Format> format;
};

struct Options {
  RunConfig run;
  std::string family = "hat";
  std::string sign = "plus";
  int n_max = 4;
  int m = 200;
  std::string seed = "arc-up";
  std::string init_path;
  std::string report_path;
  int max_iterations = oracle::MinimizeOptions{}.max_iterations;
  double tolerance_scale = 1.0;
};

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
  auto logger = std::make_shared<spdlog::logger>("elastica", sink);
  logger->set_pattern("[%l] %v");
  logger->set_level(spdlog::level::err);
  if (const char* env = std::getenv("ELASTICA_LOG")) {
    const std::string level = env;
    if (level == "error") {
      logger->set_level(spdlog::level::err);
    } else if (level == "info") {
      logger->set_level(spdlog::level::info);
    } else if (level == "debug") {
      logger->set_level(spdlog::level::debug);
    } else {
      logger->error("ELASTICA_LOG='{}' not one of error, info, debug; using error", level);
    }
  }
  return logger;
}

void add_problem_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--l", o.run.l, "Chord length l (distance between the pinned ends)");
  cmd->add_option("--L", o.run.L, "Curve length L");
}

void add_family_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--family", o.family, "hat or check")
      ->check(CLI::IsMember({"hat", "check"}, CLI::ignore_case));
}

// Copies the string-valued choices into the run configuration.
void finalize(Options& o) {
  o.run.family = CLI::detail::to_lower(o.family) == "check" ? Family::Check : Family::Hat;
  o.run.sign = CLI::detail::to_lower(o.sign) == "minus" ? Sign::Minus : Sign::Plus;
}

PinnedProblem problem_of(const RunConfig& c) {
  if (std::isnan(c.l) || std::isnan(c.L)) throw UsageError("--l and --L are required");
  return PinnedProblem(c.l, c.L);
}

Format resolve_format(const RunConfig& c) {
  if (c.format) return *c.format;
  const auto dot = c.output_path.rfind('.');
  if (dot != std::string::npos) {
    const std::string ext = c.output_path.substr(dot + 1);
    if (ext == "json") return Format::Json;
    if (ext == "svg") return Format::Svg;
  }
  return Format::Csv;
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path == "-") {
    out << content;
  } else {
    io::write_text(path, content);
  }
}

// Values from a key=value file become option defaults of the selected
// subcommand, so explicit flags still win.
void apply_config(const std::string& path, CLI::App& app) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_file(path);
  } catch (const CLI::FileError& e) {
    throw io::IoError(e.what());
  }
  for (CLI::App* sub : app.get_subcommands()) {
    for (const auto& item : items) {
      if (item.name == "++" || item.name == "--" || item.inputs.empty()) continue;
      CLI::Option* opt = sub->get_option_no_throw("--" + item.name);
      if (opt == nullptr) throw UsageError("config key '" + item.name + "' is not an option of " + sub->get_name());
      opt->default_val(item.inputs.front());
    }
  }
}

int cmd_solve(const Options& o, std::ostream& out, spdlog::logger& log) {
  const PinnedProblem problem = problem_of(o.run);
  log.info("solving the {} modulus equation for l/L = {}", to_string(o.run.family), problem.ratio());
  const ModulusSolution sol = solve_modulus(problem, o.run.family);
  const CriticalPoint cp = make_critical_point(problem, sol, 0, Sign::Plus);
  const auto ke = elliptic::complete_KE(sol.modulus);
  out << fmt::format("{:<11}{}\n", "family", to_string(sol.family));
  out << fmt::format("{:<11}{:.17g}\n", "l/L", problem.ratio());
  out << fmt::format("{:<11}{:.17g}\n", "p", sol.p());
  out << fmt::format("{:<11}{:.17g}\n", "q", sol.modulus.q());
  out << fmt::format("{:<11}{:.3e}\n", "residual", sol.residual);
  out << fmt::format("{:<11}{}\n", "iterations", sol.iterations);
  out << fmt::format("{:<11}{:.17g}\n", "K(p)", ke.k);
  out << fmt::format("{:<11}{:.17g}\n", "E(p)", ke.e);
  out << fmt::format("{:<11}{:.17g}\n", "b0", cp.b());
  out << fmt::format("{:<11}{:.17g}\n", "lambda0", cp.lambda());
  out << fmt::format("{:<11}{:.17g}\n", "energy0", cp.energy());
  return kSuccess;
}

int cmd_sample(const Options& o, std::ostream& out, spdlog::logger& log) {
  const PinnedProblem problem = problem_of(o.run);
  if (o.run.samples < 2) throw UsageError("--samples must be at least 2");
  const CriticalPoint cp = make_critical_point(problem, o.run.family, o.run.n, o.run.sign);
  log.info("sampling {} at {} points", describe(cp), o.run.samples);
  const SampledCurve curve = sample_curve(cp, o.run.samples);
  std::string content;
  switch (resolve_format(o.run)) {
    case Format::Csv:
      content = io::curve_csv(curve);
      break;
    case Format::Json:
      content = io::curve_json(curve);
      break;
    case Format::Svg:
      content = io::curve_svg(curve);
      break;
  }
  emit(o.run.output_path, content, out);
  return kSuccess;
}

int cmd_spectrum(const Options& o, std::ostream& out, spdlog::logger& log) {
  const PinnedProblem problem = problem_of(o.run);
  if (o.n_max < 0) throw UsageError("--n-max must be >= 0");
  const auto spectrum = enumerate_spectrum(problem, o.n_max);
  log.info("{} critical points", spectrum.size());
  const double least = spectrum.front().energy();
  out << fmt::format("{:>4}  {:<6}{:>4}  {:<6}{:>24}{:>25}{:>25}{:>25}  {}\n", "rank", "family", "n",
                     "sign", "p", "b", "lambda", "energy", "min");
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const auto& cp = spectrum[i];
    out << fmt::format("{:>4}  {:<6}{:>4}  {:<6}{:>24.17g}{:>25.17g}{:>25.17g}{:>25.17g}  {}\n", i + 1,
                       to_string(cp.family()), cp.n(), to_string(cp.sign()), cp.p(), cp.b(),
                       cp.lambda(), cp.energy(), cp.energy() == least ? "*" : "");
  }
  return kSuccess;
}

int cmd_verify(const Options& o, std::ostream& out, spdlog::logger& log) {
  const PinnedProblem problem = problem_of(o.run);
  if (o.n_max < 0) throw UsageError("--n-max must be >= 0");
  VerificationOptions options;
  options.tolerance_scale = o.tolerance_scale;
  log.info("verifying l/L = {} up to n = {}", problem.ratio(), o.n_max);
  const VerificationReport report = run_verification(problem, o.n_max, options);
  int passed = 0;
  for (const auto& c : report.checks) {
    out << fmt::format("{}  {}: {}\n", c.passed ? "PASS" : "FAIL", c.name, c.detail);
    passed += c.passed ? 1 : 0;
  }
  out << fmt::format("{}/{} checks passed\n", passed, report.checks.size());
  if (const CheckResult* bad = report.first_failure()) {
    log.error("verification failed: {}", bad->name);
    return kVerificationFailed;
  }
  return kSuccess;
}

int cmd_minimize(const Options& o, std::ostream& out, spdlog::logger& log) {
  const PinnedProblem problem = problem_of(o.run);
  oracle::MinimizeOptions options;
  options.max_iterations = o.max_iterations;

  oracle::MinimizeResult result;
  std::string seed = o.seed;
  int m = o.m;
  if (!o.init_path.empty()) {
    const oracle::DiscreteCurve init = io::parse_polyline_csv(io::read_text(o.init_path), problem.L());
    m = static_cast<int>(init.size());
    if (m < 16) throw UsageError(fmt::format("m ≥ 16 required (got {})", m));
    seed = "file:" + o.init_path;
    result = oracle::minimize(problem, init, options);
  } else {
    if (m < 16) throw UsageError(fmt::format("m ≥ 16 required (got {})", m));
    result = oracle::minimize(problem, m, seed, options);
  }
  const auto& rep = result.report;
  log.info("descent stopped after {} iterations, converged = {}", rep.iterations, rep.converged);

  const double closed_form = make_critical_point(problem, Family::Hat, 0, Sign::Plus).energy();
  const std::string csv_path = o.run.output_path;
  std::string report_path = o.report_path;
  if (report_path.empty()) {
    const auto dot = csv_path.rfind('.');
    const auto slash = csv_path.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    report_path = csv_path == "-" ? "-" : (has_ext ? csv_path.substr(0, dot) : csv_path) + ".json";
  }
  emit(csv_path, io::polyline_csv(result.curve), out);
  emit(report_path, io::descent_report_json(rep, {problem.l(), problem.L(), m, seed, closed_form}), out);
  if (!rep.converged) {
    log.error("no convergence within {} iterations (gradient norm {:.3e})", rep.iterations,
              rep.gradient_norm);
    return kNoConvergence;
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto log = make_logger(err);
  Options o;

  CLI::App app{"Closed-form pinned elasticae: moduli, curves, spectra and checks", "elastica"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "key=value file supplying option defaults");

  const std::map<std::string, Format> formats{
      {"csv", Format::Csv}, {"json", Format::Json}, {"svg", Format::Svg}};

  auto* solve = app.add_subcommand("solve", "Solve the modulus equation of one family");
  add_problem_options(solve, o);
  add_family_options(solve, o);

  auto* sample = app.add_subcommand("sample", "Write a sampled critical point");
  add_problem_options(sample, o);
  add_family_options(sample, o);
  sample->add_option("--n", o.run.n, "Inflection index n >= 0")->check(CLI::NonNegativeNumber);
  sample->add_option("--sign", o.sign, "plus or minus")
      ->check(CLI::IsMember({"plus", "minus"}, CLI::ignore_case));
  sample->add_option("--samples", o.run.samples, "Number of arc-length samples (>= 2)");
  sample->add_option("--format", o.run.format, "csv, json or svg (default from --out)")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  sample->add_option("--out", o.run.output_path, "Output path, - for standard output");

  auto* spectrum = app.add_subcommand("spectrum", "List critical points by energy");
  add_problem_options(spectrum, o);
  spectrum->add_option("--n-max", o.n_max, "Largest inflection index");

  auto* verify = app.add_subcommand("verify", "Run the invariant checks for one problem");
  add_problem_options(verify, o);
  verify->add_option("--n-max", o.n_max, "Largest inflection index");
  verify->add_option("--tolerance-scale", o.tolerance_scale)->group("");

  auto* minimize = app.add_subcommand("minimize", "Minimize the discrete bending energy");
  add_problem_options(minimize, o);
  minimize->add_option("--m", o.m, "Number of polyline vertices (>= 16)");
  minimize->add_option("--seed", o.seed, "arc-up, arc-down or random:<text>");
  minimize->add_option("--init", o.init_path, "Start from a polyline csv (index,x,y)");
  minimize->add_option("--out", o.run.output_path, "Polyline csv path, - for standard output");
  minimize->add_option("--report", o.report_path, "Report json path (default: --out with .json)");
  minimize->add_option("--max-iterations", o.max_iterations, "Iteration cap");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (!config_path.empty()) {
      apply_config(config_path, app);
      // default_val has already written the config values; parsing again
      // puts explicit flags back on top.
      std::vector<std::string> again(args.rbegin(), args.rend());
      app.clear();
      app.parse(again);
    }
    finalize(o);
    if (solve->parsed()) return cmd_solve(o, out, *log);
    if (sample->parsed()) return cmd_sample(o, out, *log);
    if (spectrum->parsed()) return cmd_spectrum(o, out, *log);
    if (verify->parsed()) return cmd_verify(o, out, *log);
    if (minimize->parsed()) return cmd_minimize(o, out, *log);
    return kUsageError;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const io::IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoError;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kNoConvergence;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace elastica::cli
