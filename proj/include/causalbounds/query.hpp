#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "causalbounds/error.hpp"
#include "causalbounds/graph.hpp"
#include "causalbounds/rational.hpp"

namespace causalbounds {

/// One entry of an intervention list. Either a constant setting `X = 1` or a
/// nested counterfactual setting `M(X = 0)`, which sets M to the value it
/// would take under the nested interventions.
struct Intervention {
  std::string variable;
  std::optional<int> value;
  std::vector<Intervention> nested;

  bool is_constant() const { return value.has_value(); }
  bool operator==(const Intervention&) const = default;
};

/// `Y(X = 1)`, `Y(M(X = 0), X = 1)` or a factual `Y`.
struct CounterfactualVariable {
  std::string variable;
  std::vector<Intervention> interventions;

  bool operator==(const CounterfactualVariable&) const = default;
};

/// `Y(X = 1) = 1`: a counterfactual variable asserted to take a value.
struct OutcomeEvent {
  CounterfactualVariable target;
  int value = 0;

  bool operator==(const OutcomeEvent&) const = default;
};

/// coefficient * P(conjunction of events)
struct EffectTerm {
  Rational coefficient{1};
  std::vector<OutcomeEvent> events;

  bool operator==(const EffectTerm&) const = default;
};

struct EffectQuery {
  std::vector<EffectTerm> terms;

  bool operator==(const EffectQuery&) const = default;
};

enum class Relation { Equal, LessEqual, GreaterEqual, Less, Greater };

/// `X(Z = 1) >= X(Z = 0)`; the right side may be a constant.
struct ConstraintStatement {
  CounterfactualVariable lhs;
  Relation relation = Relation::Equal;
  std::variant<CounterfactualVariable, int> rhs;
  int line = 0;

  bool operator==(const ConstraintStatement&) const = default;
};

/// Parses `p{...}` sums with optional rational coefficients, checking names,
/// value ranges and latent interventions against `g`. Throws Error with a
/// 1-based column on any rejection.
EffectQuery parse_effect(std::string_view text, const CausalGraph& g);

/// One statement per nonempty line; errors carry the line number.
std::vector<ConstraintStatement> parse_constraints(std::string_view text, const CausalGraph& g);

/// Canonical surface syntax; parse_effect(format_effect(q)) == q.
std::string format_effect(const EffectQuery& q);
std::string format_counterfactual(const CounterfactualVariable& v);
std::string format_constraint(const ConstraintStatement& c);
std::string relation_symbol(Relation r);

/// Query restrictions of the bounding method: outcomes on the right side,
/// interventions on ancestors, bounded nesting depth, and no dependence on the
/// left-side configuration once response functions are fixed. Never throws
/// for well-formed queries.
ValidationReport validate_effect(const EffectQuery& q, const CausalGraph& g);

/// P(Y(X = 1) = 1) - P(Y(X = 0) = 1) for the flagged exposure and outcome.
std::optional<std::string> default_effect_text(const CausalGraph& g);

}  // namespace causalbounds
