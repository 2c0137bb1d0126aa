// Command-line front end: bounds, evaluate, simulate, compile, latex, serve.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "causalbounds/service.hpp"

using namespace causalbounds;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Validation, "UNREADABLE_FILE", "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Inputs {
  std::string graph_file, effect, constraints_file, params_file, baseline_file;
  std::string emit = "text";
  std::uint64_t seed = 1;
  bool seed_given = false;
  double timeout = 120;
  std::size_t draws = 1000;
  int digits = 2;
  int port = 8080;
  std::string host = "127.0.0.1", static_dir;
};

CancelToken token(const Inputs& in) { return CancelToken::with_timeout(std::chrono::duration<double>(in.timeout)); }

LinearCausalProblem load_problem(const Inputs& in, const CancelToken& cancel, const std::string& constraints_file) {
  auto g = parse_graph_spec(read_file(in.graph_file));
  std::string constraints = constraints_file.empty() ? std::string() : read_file(constraints_file);
  return analyze_graph(g, constraints, in.effect, cancel);
}

std::string fixed(double x, int digits) {
  // printf rounds the exact binary value, i.e. half-even on representable ties.
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s(buf);
  if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);
  return s;
}

int run_bounds(const Inputs& in, bool latex_only) {
  auto cancel = token(in);
  auto p = load_problem(in, cancel, in.constraints_file);
  auto b = optimize_effect(p, cancel);
  std::string emit = latex_only ? "latex" : in.emit;
  if (emit == "json")
    std::cout << bounds_to_json(b).dump(2) << "\n";
  else if (emit == "latex")
    std::cout << latex_bounds(b);
  else
    std::cout << format_bounds_text(b);
  return 0;
}

int run_evaluate(const Inputs& in) {
  if (in.params_file.empty()) throw Error(ErrorKind::Validation, "MISSING_PARAMS", "--params FILE is required");
  auto cancel = token(in);
  auto p = load_problem(in, cancel, in.constraints_file);
  auto b = optimize_effect(p, cancel);
  auto exact = parse_parameter_values(read_file(in.params_file));
  std::map<std::string, double> values;
  for (const auto& [k, v] : exact) values[k] = to_double(v);
  auto r = evaluate_bounds(b, values);
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (in.emit == "json") {
    auto x = evaluate_bounds_exact(b, exact);
    Json j{{"lower", r.lower}, {"upper", r.upper}, {"lower_exact", to_string(x.lower)},
           {"upper_exact", to_string(x.upper)}, {"warnings", r.warnings}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << fixed(r.lower, in.digits) << " " << fixed(r.upper, in.digits) << "\n";
  }
  return 0;
}

int run_simulate(const Inputs& in) {
  if (!in.seed_given) throw Error(ErrorKind::Validation, "MISSING_SEED", "--seed N is required for simulate");
  if (in.draws == 0) throw Error(ErrorKind::Validation, "INVALID_DRAWS", "--draws must be at least 1");
  auto cancel = token(in);
  auto p = load_problem(in, cancel, in.constraints_file);
  auto b = optimize_effect(p, cancel);
  SimulationOptions so;
  so.draws = in.draws;
  so.seed = in.seed;
  std::optional<SymbolicBoundPair> base;
  if (!in.baseline_file.empty()) {
    base = optimize_effect(load_problem(in, cancel, in.baseline_file == "-" ? "" : in.baseline_file), cancel);
    so.baseline = &*base;
  }
  auto report = simulate_bounds(p, b, so, cancel);
  if (in.emit == "json") {
    std::cout << simulation_to_json(report, false).dump(2) << "\n";
  } else {
    std::cout << "draws: " << report.draws.size() << "\nseed: " << report.seed << "\nviolations: " << report.violations
              << "\nmean width: " << fixed(report.mean_width, 6) << "\nmax width: " << fixed(report.max_width, 6) << "\n";
    if (so.baseline) std::cout << "wider than baseline: " << report.wider_than_baseline << "\n";
  }
  return report.violations == 0 ? 0 : 1;
}

int run_compile(const Inputs& in) {
  auto cancel = token(in);
  auto p = load_problem(in, cancel, in.constraints_file);
  std::cout << problem_to_json(p).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tight symbolic bounds on causal effects in two-sided DAGs"};
  app.require_subcommand(1);
  Inputs in;

  auto common = [&](CLI::App* sub, bool needs_graph = true) {
    auto g = sub->add_option("--graph", in.graph_file, "graph specification file")->check(CLI::ExistingFile);
    if (needs_graph) g->required();
    sub->add_option("--effect", in.effect, "query, e.g. \"p{Y(X = 1) = 1} - p{Y(X = 0) = 1}\"");
    sub->add_option("--constraints", in.constraints_file, "file with one constraint per line")->check(CLI::ExistingFile);
    sub->add_option("--timeout", in.timeout, "seconds")->check(CLI::PositiveNumber);
    sub->add_option("--emit", in.emit, "output format")->check(CLI::IsMember({"text", "latex", "json"}));
  };
  auto* bounds = app.add_subcommand("bounds", "compute symbolic bounds");
  common(bounds);
  auto* evaluate = app.add_subcommand("evaluate", "evaluate bounds at parameter values");
  common(evaluate);
  evaluate->add_option("--params", in.params_file, "name=value lines")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--digits", in.digits, "decimals in text output")->check(CLI::Range(0, 17));
  auto* simulate = app.add_subcommand("simulate", "check bounds on random distributions");
  common(simulate);
  simulate->add_option("--seed", in.seed, "random seed")->required()->each([&](const std::string&) { in.seed_given = true; });
  simulate->add_option("--draws", in.draws, "number of draws");
  simulate->add_option("--baseline-constraints", in.baseline_file,
                       "compare widths against the bounds under these constraints ('-' for none)");
  auto* compile = app.add_subcommand("compile", "emit the linear program as JSON");
  common(compile);
  auto* latex = app.add_subcommand("latex", "emit LaTeX for the bounds");
  common(latex);
  auto* serve = app.add_subcommand("serve", "run the JSON-over-HTTP service");
  serve->add_option("--port", in.port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", in.host, "bind address");
  serve->add_option("--timeout", in.timeout, "default request timeout in seconds")->check(CLI::PositiveNumber);
  serve->add_option("--static", in.static_dir, "directory served at /")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*bounds) return run_bounds(in, false);
    if (*evaluate) return run_evaluate(in);
    if (*simulate) return run_simulate(in);
    if (*compile) return run_compile(in);
    if (*latex) return run_bounds(in, true);
    if (*serve) {
      ServiceOptions so;
      so.default_timeout_seconds = in.timeout;
      so.static_dir = in.static_dir;
      run_server(in.host, in.port, so);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << e.code() << "]: " << e.what() << "\n";
    for (const auto& v : e.violations())
      std::cerr << "  " << v.code << (v.element.empty() ? "" : " (" + v.element + ")") << ": " << v.message << "\n";
    return e.kind() == ErrorKind::Internal || e.kind() == ErrorKind::Timeout || e.kind() == ErrorKind::Cancelled ? 3 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
