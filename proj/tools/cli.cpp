#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "circlephase/errors.hpp"
#include "circlephase/solver.hpp"

namespace circlephase::cli {

namespace {

struct SolveArgs {
  std::string input;
  std::string mode = "complex";
  double epsilon = 0.1;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int maxLevel = 8;
  std::string report;
  std::string samples;
  int nSamples = 101;
};

struct VerifyArgs {
  std::string report;
  std::string input;
  std::optional<double> tol;
};

struct SampleArgs {
  std::string report;
  std::string samples;
  int nSamples = 101;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
  if (!file) throw InputError("failed writing '" + path + "'");
}

nlohmann::json parse_json(const std::string& text, const std::string& what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed " + what + ": " + e.what());
  }
}

bool looks_like_spec(const nlohmann::json& j) {
  return j.is_object() && (j.contains("linear") || j.contains("odd_terms"));
}

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string samples_csv(const PhaseTree& tree, int n) {
  std::string csv = "t,g,re_h,im_h\n";
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    const std::complex<double> h = eval_h(tree, t);
    csv += fmt(t) + "," + fmt(eval_g(tree, t)) + "," + fmt(h.real()) + "," + fmt(h.imag()) + "\n";
  }
  return csv;
}

int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const SolveMode mode = parse_mode(a.mode);
  if (mode == SolveMode::Pinkus) throw InputError("mode 'pinkus' is not available from the command line");
  SolveConfig cfg;
  cfg.epsilon = a.epsilon;
  cfg.absTol = a.tol;
  cfg.zero.seed = a.seed;
  cfg.zero.maxRefineLevel = a.maxLevel;

  const nlohmann::json doc = parse_json(read_file(a.input), "input");
  SolveReport report;
  if (mode == SolveMode::Generic && looks_like_spec(doc)) {
    report = solve_generic(spec_from_json(doc), cfg);
  } else {
    report = solve(mode, problem_from_json(doc), cfg);
  }

  write_text(a.report, serialize_report(report) + "\n", out);
  if (!a.samples.empty()) write_text(a.samples, samples_csv(report.tree, a.nSamples), out);
  err << "mode=" << mode_name(report.mode) << " residual=" << report.residualNorm
      << " converged=" << (report.converged ? "true" : "false") << " wall_time_ms=" << report.wallTimeMs << "\n";
  return report.converged && report.boundSatisfied ? kExitOk : kExitUnsolved;
}

int run_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  const SolveReport report = parse_report(read_file(a.report));
  const nlohmann::json doc = parse_json(read_file(a.input), "input");
  const FunctionalSpec spec = looks_like_spec(doc) ? spec_from_json(doc) : spec_for_mode(report.mode, problem_from_json(doc));
  if (spec.output_dim() != static_cast<int>(report.residuals.size())) {
    throw InputError("report has " + std::to_string(report.residuals.size()) + " residuals but the input defines " +
                     std::to_string(spec.output_dim()));
  }
  const Verification v = verify(report.tree, spec);
  const double tol = a.tol.value_or(report.tolerance);
  nlohmann::json j{{"schema", 1}, {"residuals", v.residuals}, {"residual_norm", v.residualNorm}, {"tolerance", tol}};
  j["w11"] = v.w11 ? nlohmann::json(*v.w11) : nlohmann::json(nullptr);
  j["sign_changes"] = v.signChanges ? nlohmann::json(*v.signChanges) : nlohmann::json(nullptr);
  out << j.dump(2) << "\n";
  if (v.residualNorm > tol) {
    err << "residual " << v.residualNorm << " exceeds tolerance " << tol << "\n";
    return kExitUnsolved;
  }
  return kExitOk;
}

int run_sample(const SampleArgs& a, std::ostream& out) {
  const SolveReport report = parse_report(read_file(a.report));
  write_text(a.samples, samples_csv(report.tree, a.nSamples), out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circle-valued functions annihilating prescribed functionals"};
  app.require_subcommand(1);

  SolveArgs solveArgs;
  CLI::App* solveCmd = app.add_subcommand("solve", "Find h and write a report");
  solveCmd->add_option("--input", solveArgs.input, "Problem JSON (functional spec JSON for generic mode)")->required();
  solveCmd->add_option("--mode", solveArgs.mode, "complex | real-part | hobby-rice | improved | generic")
      ->capture_default_str();
  solveCmd->add_option("--epsilon", solveArgs.epsilon, "Slack of the improved bound, in (0, 1]")
      ->capture_default_str();
  solveCmd->add_option("--tol", solveArgs.tol, "Absolute residual tolerance (default 1e-8 * (1 + sum of L1 norms))");
  solveCmd->add_option("--seed", solveArgs.seed, "Seed of the local search")->capture_default_str();
  solveCmd->add_option("--max-level", solveArgs.maxLevel, "Deepest triangulation level")
      ->check(CLI::Range(0, 12))
      ->capture_default_str();
  solveCmd->add_option("--report", solveArgs.report, "Report JSON path (default: standard output)");
  solveCmd->add_option("--samples", solveArgs.samples, "Also write a CSV of samples of h");
  solveCmd->add_option("--n-samples", solveArgs.nSamples, "Number of uniform sample points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  VerifyArgs verifyArgs;
  CLI::App* verifyCmd = app.add_subcommand("verify", "Re-check a report against its input");
  verifyCmd->add_option("--report", verifyArgs.report, "Report JSON")->required();
  verifyCmd->add_option("--input", verifyArgs.input, "Problem or functional spec JSON")->required();
  verifyCmd->add_option("--tol", verifyArgs.tol, "Override the report's tolerance");

  SampleArgs sampleArgs;
  CLI::App* sampleCmd = app.add_subcommand("sample", "Write t, g(t), Re h, Im h as CSV");
  sampleCmd->add_option("--report", sampleArgs.report, "Report JSON")->required();
  sampleCmd->add_option("--samples", sampleArgs.samples, "CSV path (default: standard output)");
  sampleCmd->add_option("--n-samples", sampleArgs.nSamples, "Number of uniform sample points")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (*solveCmd) return run_solve(solveArgs, out, err);
    if (*verifyCmd) return run_verify(verifyArgs, out, err);
    return run_sample(sampleArgs, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace circlephase::cli
