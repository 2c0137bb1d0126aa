#pragma once

#include <memory>
#include <string>
#include <vector>

#include "causalbounds/cancel.hpp"
#include "causalbounds/graph.hpp"
#include "causalbounds/query.hpp"
#include "causalbounds/rational.hpp"
#include "causalbounds/response.hpp"

namespace causalbounds {

/// An observable conditional probability P(right values | left values).
struct Parameter {
  std::string name;            // p<right digits>[_<left digits>]
  std::string interpretation;  // "P(X = 0, Y = 0 | Z = 0)"
  std::vector<int> right_values;  // canonical right-variable order
  std::vector<int> left_values;   // canonical left-variable order

  bool operator==(const Parameter&) const = default;
};

/// Value digits as used in parameter names; values above 9 are bracketed.
std::string value_digits(const std::vector<int>& values);

/// Ordering of parameter names: left configuration varies fastest, then the
/// right configuration with the first right variable varying fastest.
bool parameter_name_less(const std::string& a, const std::string& b);

/// Linear program over the probabilities q of joint right-side response
/// vectors:  R q = (1, p),  q >= 0,  objective c^T q.
struct LinearCausalProblem {
  CausalGraph graph;  // augmented
  std::shared_ptr<const ResponseFunctionTable> table;
  std::vector<ConstraintStatement> constraints;
  AdmissibleSets admissible;

  std::vector<ResponseVector> gammas;  // one per q column
  std::vector<std::string> q_names;
  std::vector<Parameter> parameters;
  /// (B + 1) x columns; row 0 is all ones, row 1 + j belongs to parameters[j].
  std::vector<std::vector<int>> r_matrix;
  std::vector<std::string> constraint_strings;
  /// Rows of r_matrix forming a maximal independent subset (greedy, in order).
  std::vector<std::size_t> kept_rows;

  EffectQuery effect;
  std::string effect_text;
  RationalVector objective;
  std::vector<std::vector<std::string>> term_q_names;  // per query term

  std::vector<std::string> logs;

  std::size_t columns() const { return q_names.size(); }
  /// Field-wise equality, ignoring logs.
  bool same_problem(const LinearCausalProblem& other) const;
};

std::vector<Parameter> enumerate_parameters(const CausalGraph& g);

struct ConstraintMatrix {
  std::vector<ResponseVector> gammas;
  std::vector<std::string> q_names;
  std::vector<std::vector<int>> r_matrix;
  std::vector<std::string> constraint_strings;
};

/// Builds R = (1; P) over all admissible joint right-side response vectors.
ConstraintMatrix create_constraint_matrix(const ResponseFunctionTable& t, const AdmissibleSets& admissible,
                                          const std::vector<Parameter>& parameters, const CancelToken& cancel = {});

struct EffectVector {
  RationalVector objective;
  std::vector<std::vector<std::string>> term_q_names;
};

/// Objective coefficients c for the query; throws Error(Validation,
/// LEFT_DEPENDENT_QUERY) if a term's truth value depends on the left side.
EffectVector create_effect_vector(const ResponseFunctionTable& t, const std::vector<ResponseVector>& gammas,
                                  const std::vector<std::string>& q_names, const EffectQuery& q);

/// Full pipeline from a graph (augmented on demand), constraint statements
/// and an effect string. Throws Error on any invalid input.
LinearCausalProblem analyze_graph(const CausalGraph& g, const std::string& constraints_text,
                                  const std::string& effect_text, const CancelToken& cancel = {});

/// Reuses everything except the objective and the query.
LinearCausalProblem update_effect(const LinearCausalProblem& p, const std::string& effect_text);

}  // namespace causalbounds
