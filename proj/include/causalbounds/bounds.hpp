#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalbounds/cancel.hpp"
#include "causalbounds/polytope.hpp"
#include "causalbounds/problem.hpp"

namespace causalbounds {

struct ParameterNameLess {
  bool operator()(const std::string& a, const std::string& b) const { return parameter_name_less(a, b); }
};

/// constant + sum of coefficient * parameter. Zero coefficients are never
/// stored once canonicalized.
struct LinearExpression {
  Rational constant{0};
  std::map<std::string, Rational, ParameterNameLess> coefficients;

  void add(const std::string& name, const Rational& c) { coefficients[name] += c; }
  bool operator==(const LinearExpression&) const = default;

  Rational evaluate(const std::map<std::string, Rational>& values) const;
  double evaluate(const std::map<std::string, double>& values) const;
};

LinearExpression canonicalize_expression(LinearExpression e);

/// Parses the printed form, e.g. "1 - p10_0 - 2p01_1" or "-p00_0 + 1/2 p11".
LinearExpression parse_linear_expression(std::string_view text);

/// "p00_0 - p00_1 - p10_1 - p01_1"; constants lead, unit coefficients are
/// implicit, other coefficients are written without a space ("2p10_1").
std::string format_expression(const LinearExpression& e);

/// Total order used to list bound expressions.
bool expression_less(const LinearExpression& a, const LinearExpression& b);

enum class BoundSense { Lower, Upper };

/// Dual of  min s c^T q  s.t.  R~ q = b~, q >= 0  (s = +1 for lower, -1 for
/// upper): {y : R~^T y <= s c}, maximized as b~^T y.
struct DualProgram {
  HPolyhedron polyhedron;
  BoundSense sense = BoundSense::Lower;
  std::vector<std::size_t> kept_rows;            // r_matrix row per y component
  std::vector<std::optional<std::string>> row_parameter;  // nullopt: the ones row
};

DualProgram build_dual(const LinearCausalProblem& p, BoundSense sense);

/// Affine form b~^T v in the parameters, negated for the upper sense so that
/// the result is a candidate upper bound.
LinearExpression evaluate_dual_vertex(const DualProgram& d, const RationalVector& v);

struct SymbolicBoundPair {
  std::vector<LinearExpression> lower;  // bound = max
  std::vector<LinearExpression> upper;  // bound = min
  std::vector<Parameter> parameters;
  std::string effect_text;
  std::vector<std::string> logs;  // deterministic
  double elapsed_ms = 0;          // vertex enumeration wall time

  bool same_bounds(const SymbolicBoundPair& o) const {
    return lower == o.lower && upper == o.upper && parameters == o.parameters;
  }
};

SymbolicBoundPair optimize_effect(const LinearCausalProblem& p, const CancelToken& cancel = {});

struct BoundValues {
  double lower = 0;
  double upper = 0;
  std::vector<std::string> warnings;
};

struct ExactBoundValues {
  Rational lower;
  Rational upper;
  std::vector<std::string> warnings;
};

/// Throws Error(Validation) with MISSING_PARAMETER / PARAMETER_OUT_OF_RANGE.
/// Non-normalized conditional distributions only produce a warning.
BoundValues evaluate_bounds(const SymbolicBoundPair& b, const std::map<std::string, double>& values);
ExactBoundValues evaluate_bounds_exact(const SymbolicBoundPair& b, const std::map<std::string, Rational>& values);

/// Console layout: "lower bound =  \nMAX {\n  ...,\n  ...\n}" and the same for
/// the upper bound, separated by a dashed rule.
std::string format_bounds_text(const SymbolicBoundPair& b);

/// align* block with max/min cases; parameters replaced by their
/// interpretations.
std::string latex_bounds(const SymbolicBoundPair& b);
/// One expression with parameters replaced by interpretations.
std::string latex_expression(const LinearExpression& e, const std::vector<Parameter>& parameters);

struct SimulationDraw {
  double theta = 0;
  double lower = 0;
  double upper = 0;
  std::optional<double> baseline_lower, baseline_upper;
  bool violation = false;
  bool wider_than_baseline = false;
};

struct SimulationReport {
  std::uint64_t seed = 0;
  std::vector<SimulationDraw> draws;
  std::size_t violations = 0;
  std::size_t wider_than_baseline = 0;
  double mean_width = 0;
  double max_width = 0;
};

struct SimulationOptions {
  std::size_t draws = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  double tolerance = 1e-9;
  /// Paired comparison: a less constrained problem over the same graph and
  /// query. Draws are taken on `p`; parameters are pushed through both.
  const SymbolicBoundPair* baseline = nullptr;
};

/// Samples q uniformly from the simplex over admissible response vectors,
/// derives p = P q and checks lower(p) <= c^T q <= upper(p).
SimulationReport simulate_bounds(const LinearCausalProblem& p, const SymbolicBoundPair& b,
                                 const SimulationOptions& options, const CancelToken& cancel = {});

/// Parameter values implied by a distribution over the q columns.
std::map<std::string, Rational> parameters_from_q(const LinearCausalProblem& p, const RationalVector& q);
std::map<std::string, double> parameters_from_q(const LinearCausalProblem& p, const std::vector<double>& q);

/// "name = value" lines ('#' comments allowed); values are decimals or n/d.
std::map<std::string, Rational> parse_parameter_values(std::string_view text);

}  // namespace causalbounds
