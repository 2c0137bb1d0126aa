#include "causalbounds/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <thread>

namespace causalbounds {

Rational LinearExpression::evaluate(const std::map<std::string, Rational>& values) const {
  Rational s = constant;
  for (const auto& [name, c] : coefficients) {
    auto it = values.find(name);
    if (it == values.end())
      throw Error(ErrorKind::Validation, "MISSING_PARAMETER", "no value for parameter " + name);
    s += c * it->second;
  }
  return s;
}

double LinearExpression::evaluate(const std::map<std::string, double>& values) const {
  double s = to_double(constant);
  for (const auto& [name, c] : coefficients) {
    auto it = values.find(name);
    if (it == values.end())
      throw Error(ErrorKind::Validation, "MISSING_PARAMETER", "no value for parameter " + name);
    s += to_double(c) * it->second;
  }
  return s;
}

LinearExpression canonicalize_expression(LinearExpression e) {
  e.constant.canonicalize();
  for (auto it = e.coefficients.begin(); it != e.coefficients.end();) {
    it->second.canonicalize();
    if (it->second == 0)
      it = e.coefficients.erase(it);
    else
      ++it;
  }
  return e;
}

LinearExpression parse_linear_expression(std::string_view text) {
  LinearExpression e;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& msg) {
    return syntax_error(msg, SourceLocation{1, static_cast<int>(i) + 1});
  };
  bool first = true;
  skip();
  if (i == text.size()) return e;
  while (true) {
    skip();
    int sign = 1;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      sign = text[i] == '-' ? -1 : 1;
      ++i;
      skip();
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;
    Rational coef(1);
    bool has_number = false;
    std::size_t start = i;
    while (i < text.size() && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '/')) ++i;
    if (i > start) {
      coef = parse_rational(text.substr(start, i - start));
      has_number = true;
    }
    skip();
    if (i < text.size() && text[i] == '*') {
      ++i;
      skip();
    }
    std::size_t name_start = i;
    if (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
                                 text[i] == '[' || text[i] == ']'))
        ++i;
    }
    if (i > name_start) {
      e.add(std::string(text.substr(name_start, i - name_start)), sign * coef);
    } else {
      if (!has_number) throw fail("expected a number or parameter name");
      e.constant += sign * coef;
    }
    skip();
    if (i == text.size()) break;
  }
  return canonicalize_expression(std::move(e));
}

std::string format_expression(const LinearExpression& e) {
  std::string out;
  if (e.constant != 0) out = to_string(e.constant);
  for (const auto& [name, c] : e.coefficients) {
    if (c == 0) continue;
    Rational mag = abs(c);
    std::string term = (mag == 1 ? std::string() : to_string(mag)) + name;
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

// Reverse order of the printed forms: expressions led by a positive
// parameter come before negated ones, larger constants first.
bool expression_less(const LinearExpression& a, const LinearExpression& b) {
  return format_expression(a) > format_expression(b);
}

DualProgram build_dual(const LinearCausalProblem& p, BoundSense sense) {
  DualProgram d;
  d.sense = sense;
  d.kept_rows = p.kept_rows;
  for (auto r : d.kept_rows)
    d.row_parameter.push_back(r == 0 ? std::nullopt : std::optional<std::string>(p.parameters[r - 1].name));

  const std::size_t k = d.kept_rows.size(), n = p.columns();
  RationalMatrix a(n, RationalVector(k));
  RationalVector b(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < k; ++i) a[c][i] = p.r_matrix[d.kept_rows[i]][c];
    b[c] = sense == BoundSense::Lower ? p.objective[c] : Rational(-p.objective[c]);
  }
  d.polyhedron = HPolyhedron(std::move(a), std::move(b), k);
  return d;
}

LinearExpression evaluate_dual_vertex(const DualProgram& d, const RationalVector& v) {
  LinearExpression e;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == 0) continue;
    if (d.row_parameter[i])
      e.add(*d.row_parameter[i], v[i]);
    else
      e.constant += v[i];
  }
  if (d.sense == BoundSense::Upper) {
    e.constant = -e.constant;
    for (auto& [name, c] : e.coefficients) c = -c;
  }
  return canonicalize_expression(std::move(e));
}

namespace {

std::vector<LinearExpression> unique_sorted(std::vector<LinearExpression> xs) {
  std::sort(xs.begin(), xs.end(), expression_less);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

std::vector<LinearExpression> bound_side(const LinearCausalProblem& p, BoundSense sense, const CancelToken& cancel,
                                         std::vector<std::string>& logs) {
  auto d = build_dual(p, sense);
  DDStats stats;
  auto v = dd_vertex_enumeration(d.polyhedron, cancel, &stats);
  const char* label = sense == BoundSense::Lower ? "lower" : "upper";
  if (!v.lineality.empty())
    throw Error(ErrorKind::Internal, "DUAL_NOT_POINTED",
                std::string(label) + " dual has a lineality space of dimension " +
                    std::to_string(v.lineality.size()) + " after rank reduction");
  if (v.vertices.empty())
    throw Error(ErrorKind::Internal, "DUAL_INFEASIBLE", std::string(label) + " dual region is empty");

  std::vector<LinearExpression> out;
  for (const auto& vert : v.vertices) out.push_back(evaluate_dual_vertex(d, vert));
  out = unique_sorted(std::move(out));

  std::ostringstream log;
  log << label << " bound: dual dimension " << d.polyhedron.dimension << ", " << d.polyhedron.rows()
      << " halfspaces, " << v.vertices.size() << " vertices, " << v.rays.size() << " rays, " << out.size()
      << " distinct expressions, " << stats.max_intermediate_rays << " max intermediate rays";
  logs.push_back(log.str());
  for (const auto& r : v.rays) {
    std::string s = std::string(label) + " dual ray:";
    for (const auto& x : r) s += " " + to_string(x);
    logs.push_back(s);
  }
  return out;
}

}  // namespace

SymbolicBoundPair optimize_effect(const LinearCausalProblem& p, const CancelToken& cancel) {
  SymbolicBoundPair b;
  b.parameters = p.parameters;
  b.effect_text = p.effect_text;
  b.logs = p.logs;

  if (!p.objective.empty() &&
      std::all_of(p.objective.begin(), p.objective.end(), [&](const Rational& c) { return c == p.objective[0]; })) {
    LinearExpression e;
    e.constant = p.objective[0];
    e = canonicalize_expression(std::move(e));
    b.lower = {e};
    b.upper = {e};
    b.logs.push_back("objective is constant; bounds coincide without vertex enumeration");
    return b;
  }
  auto t0 = std::chrono::steady_clock::now();
  b.lower = bound_side(p, BoundSense::Lower, cancel, b.logs);
  b.upper = bound_side(p, BoundSense::Upper, cancel, b.logs);
  b.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return b;
}

namespace {

double as_double(double x) { return x; }
double as_double(const Rational& r) { return to_double(r); }

template <class T>
void check_values(const SymbolicBoundPair& b, const std::map<std::string, T>& values, std::vector<std::string>& warnings,
                  double tolerance) {
  std::map<std::vector<int>, T> sums;
  for (const auto& prm : b.parameters) {
    auto it = values.find(prm.name);
    if (it == values.end())
      throw Error(ErrorKind::Validation, "MISSING_PARAMETER", "no value for parameter " + prm.name);
    if (it->second < 0 || it->second > 1)
      throw Error(ErrorKind::Validation, "PARAMETER_OUT_OF_RANGE",
                  "value of " + prm.name + " is outside [0, 1]");
    sums[prm.left_values] += it->second;
  }
  for (const auto& [left, s] : sums) {
    double diff = std::abs(as_double(s) - 1.0);
    if (diff > tolerance) {
      std::string cfg;
      for (int v : left) cfg += std::to_string(v);
      warnings.push_back("conditional probabilities" + (cfg.empty() ? std::string() : " given left values " + cfg) +
                         " sum to " + std::to_string(as_double(s)) + ", not 1");
    }
  }
  for (const auto& [name, v] : values) {
    bool known = std::any_of(b.parameters.begin(), b.parameters.end(),
                             [&](const Parameter& prm) { return prm.name == name; });
    if (!known) warnings.push_back("ignoring unknown parameter " + name);
  }
}

}  // namespace

BoundValues evaluate_bounds(const SymbolicBoundPair& b, const std::map<std::string, double>& values) {
  BoundValues out;
  check_values(b, values, out.warnings, 1e-9);
  out.lower = -HUGE_VAL;
  out.upper = HUGE_VAL;
  for (const auto& e : b.lower) out.lower = std::max(out.lower, e.evaluate(values));
  for (const auto& e : b.upper) out.upper = std::min(out.upper, e.evaluate(values));
  return out;
}

ExactBoundValues evaluate_bounds_exact(const SymbolicBoundPair& b, const std::map<std::string, Rational>& values) {
  ExactBoundValues out;
  check_values(b, values, out.warnings, 0.0);
  for (std::size_t i = 0; i < b.lower.size(); ++i) {
    Rational v = b.lower[i].evaluate(values);
    if (i == 0 || v > out.lower) out.lower = v;
  }
  for (std::size_t i = 0; i < b.upper.size(); ++i) {
    Rational v = b.upper[i].evaluate(values);
    if (i == 0 || v < out.upper) out.upper = v;
  }
  return out;
}

std::string format_bounds_text(const SymbolicBoundPair& b) {
  auto block = [](const char* head, const char* op, const std::vector<LinearExpression>& xs) {
    std::string s = std::string(head) + " =  \n" + op + " {\n";
    for (std::size_t i = 0; i < xs.size(); ++i) s += "  " + format_expression(xs[i]) + (i + 1 < xs.size() ? ",\n" : "\n");
    return s + "}\n";
  };
  return block("lower bound", "MAX", b.lower) + std::string(40, '-') + "\n" + block("upper bound", "MIN", b.upper);
}

std::string latex_expression(const LinearExpression& e, const std::vector<Parameter>& parameters) {
  auto interp = [&](const std::string& name) {
    for (const auto& p : parameters)
      if (p.name == name) return p.interpretation;
    return name;
  };
  std::string out;
  if (e.constant != 0) out = to_string(e.constant);
  for (const auto& [name, c] : e.coefficients) {
    Rational mag = abs(c);
    std::string coef;
    if (mag != 1)
      coef = mag.get_den() == 1 ? to_string(mag)
                                : "\\frac{" + mag.get_num().get_str() + "}{" + mag.get_den().get_str() + "}";
    std::string term = coef + interp(name);
    if (out.empty())
      out = (c < 0 ? "-" : "") + term;
    else
      out += (c < 0 ? " - " : " + ") + term;
  }
  return out.empty() ? "0" : out;
}

std::string latex_bounds(const SymbolicBoundPair& b) {
  auto side = [&](const char* label, const char* op, const std::vector<LinearExpression>& xs, const char* end) {
    std::string s = std::string(" \\mbox{") + label + "} &= ";
    if (xs.size() == 1) return s + latex_expression(xs[0], b.parameters) + end;
    s += std::string("\\mbox{") + op + "} \\left. \\begin{cases} ";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      s += "  " + latex_expression(xs[i], b.parameters);
      s += i + 1 < xs.size() ? ",\\\\ \n " : " \\end{cases} \\right\\}";
    }
    return s + end;
  };
  return "\\begin{align*}\n" + side("Lower bound", "max", b.lower, " \\\\\n") +
         side("Upper bound", "min", b.upper, ".\n") + " \\end{align*}\n";
}

std::map<std::string, Rational> parameters_from_q(const LinearCausalProblem& p, const RationalVector& q) {
  std::map<std::string, Rational> out;
  for (std::size_t j = 0; j < p.parameters.size(); ++j) {
    Rational s(0);
    for (std::size_t c = 0; c < q.size(); ++c)
      if (p.r_matrix[j + 1][c]) s += q[c];
    out[p.parameters[j].name] = s;
  }
  return out;
}

std::map<std::string, double> parameters_from_q(const LinearCausalProblem& p, const std::vector<double>& q) {
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < p.parameters.size(); ++j) {
    double s = 0;
    for (std::size_t c = 0; c < q.size(); ++c)
      if (p.r_matrix[j + 1][c]) s += q[c];
    out[p.parameters[j].name] = std::min(1.0, s);
  }
  return out;
}

SimulationReport simulate_bounds(const LinearCausalProblem& p, const SymbolicBoundPair& b,
                                 const SimulationOptions& options, const CancelToken& cancel) {
  if (options.draws == 0) throw Error(ErrorKind::Validation, "INVALID_DRAWS", "draw count must be at least 1");
  SimulationReport report;
  report.seed = options.seed;
  report.draws.resize(options.draws);
  std::vector<double> objective;
  for (const auto& c : p.objective) objective.push_back(to_double(c));

  auto run = [&](std::size_t begin, std::size_t end) {
    std::vector<double> q(p.columns());
    for (std::size_t i = begin; i < end; ++i) {
      if ((i & 63) == 0 && (cancel.cancelled() || cancel.timed_out())) return;
      // Each draw owns a substream, so results do not depend on threading.
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
      std::mt19937_64 rng(seq);
      std::exponential_distribution<double> ex(1.0);
      double total = 0;
      for (auto& x : q) total += (x = ex(rng));
      double theta = 0;
      for (std::size_t c = 0; c < q.size(); ++c) {
        q[c] /= total;
        theta += objective[c] * q[c];
      }
      auto values = parameters_from_q(p, q);
      auto& d = report.draws[i];
      d.theta = theta;
      BoundValues bv;
      check_values(b, values, bv.warnings, 1e-6);
      d.lower = -HUGE_VAL;
      d.upper = HUGE_VAL;
      for (const auto& e : b.lower) d.lower = std::max(d.lower, e.evaluate(values));
      for (const auto& e : b.upper) d.upper = std::min(d.upper, e.evaluate(values));
      d.violation = d.lower > theta + options.tolerance || d.upper < theta - options.tolerance;
      if (options.baseline) {
        double lo = -HUGE_VAL, hi = HUGE_VAL;
        for (const auto& e : options.baseline->lower) lo = std::max(lo, e.evaluate(values));
        for (const auto& e : options.baseline->upper) hi = std::min(hi, e.evaluate(values));
        d.baseline_lower = lo;
        d.baseline_upper = hi;
        d.wider_than_baseline = (d.upper - d.lower) > (hi - lo) + options.tolerance;
      }
    }
  };

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, (options.draws + 63) / 64));
  if (threads <= 1) {
    run(0, options.draws);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (options.draws + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      std::size_t lo = t * chunk, hi = std::min(options.draws, lo + chunk);
      if (lo < hi) pool.emplace_back(run, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  cancel.throw_if_stopped();

  double total_width = 0;
  for (const auto& d : report.draws) {
    report.violations += d.violation;
    report.wider_than_baseline += d.wider_than_baseline;
    total_width += d.upper - d.lower;
    report.max_width = std::max(report.max_width, d.upper - d.lower);
  }
  report.mean_width = total_width / static_cast<double>(options.draws);
  return report;
}

namespace {

Rational parse_decimal(std::string_view s) {
  auto dot = s.find('.');
  if (s.find('/') != std::string_view::npos || dot == std::string_view::npos) return parse_rational(s);
  std::string digits(s.substr(0, dot));
  std::string frac(s.substr(dot + 1));
  if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("malformed number: " + std::string(s));
  bool neg = !digits.empty() && digits[0] == '-';
  if (neg || (!digits.empty() && digits[0] == '+')) digits.erase(0, 1);
  if (digits.empty()) digits = "0";
  Rational r(BigInt(digits + frac, 10), BigInt("1" + std::string(frac.size(), '0'), 10));
  r.canonicalize();
  return neg ? Rational(-r) : r;
}

}  // namespace

std::map<std::string, Rational> parse_parameter_values(std::string_view text) {
  std::map<std::string, Rational> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw syntax_error("expected name = value", SourceLocation{lineno, static_cast<int>(first) + 1});
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r"), z = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, z - a + 1);
    };
    std::string name = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    try {
      out[name] = parse_decimal(value);
    } catch (const std::invalid_argument&) {
      throw syntax_error("malformed value '" + value + "'", SourceLocation{lineno, static_cast<int>(eq) + 2});
    }
    if (name.empty()) throw syntax_error("missing parameter name", SourceLocation{lineno, 1});
  }
  return out;
}

}  // namespace causalbounds
