#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "causalbounds/graph.hpp"
#include "causalbounds/query.hpp"

namespace causalbounds {

/// Response functions of one observed variable. Function `index` maps the
/// k-th parent assignment (parents in canonical order, lexicographic with the
/// first parent most significant) to digit k of `index` written in base
/// `cardinality`, least-significant digit first.
struct ResponseEntry {
  std::size_t variable = 0;          // index into CausalGraph::variables()
  std::vector<std::size_t> parents;  // observed parents, canonical order
  std::vector<int> parent_cardinalities;
  int cardinality = 2;
  std::uint64_t assignments = 1;  // number of parent assignments
  std::uint64_t count = 0;        // cardinality ^ assignments

  /// Position of a parent assignment in lexicographic order.
  std::uint64_t assignment_index(std::span<const int> parent_values) const;
  /// Value of response function `index` at the given parent values.
  int evaluate(std::uint64_t index, std::span<const int> parent_values) const;
  /// Value of response function `index` at assignment position `k`.
  int digit(std::uint64_t index, std::uint64_t k) const;
};

/// One response-function index per observed variable, in canonical order of
/// the observed variables (ResponseFunctionTable::slots()).
struct ResponseVector {
  std::vector<std::uint64_t> index;

  bool operator==(const ResponseVector&) const = default;
};

class ResponseFunctionTable {
 public:
  /// Throws Error if the graph is not augmented/valid or a variable has more
  /// response functions than fit in 64 bits.
  explicit ResponseFunctionTable(const CausalGraph& g);

  const CausalGraph& graph() const { return graph_; }
  /// Observed variables in canonical order; slot i of a ResponseVector
  /// belongs to graph variable slots()[i].
  const std::vector<std::size_t>& slots() const { return slots_; }
  std::optional<std::size_t> slot_of(std::size_t variable) const;
  const ResponseEntry& entry_for_slot(std::size_t slot) const { return entries_[slot]; }
  const ResponseEntry& entry(std::size_t variable) const;
  std::size_t size() const { return entries_.size(); }

  /// Slots of observed right-side / left-side variables, canonical order.
  const std::vector<std::size_t>& right_slots() const { return right_slots_; }
  const std::vector<std::size_t>& left_slots() const { return left_slots_; }

  /// Product of response-function counts over the right-side variables.
  std::uint64_t right_joint_count() const;

 private:
  CausalGraph graph_;
  std::vector<std::size_t> slots_;
  std::vector<std::size_t> slot_by_variable_;  // npos for latent
  std::vector<ResponseEntry> entries_;
  std::vector<std::size_t> right_slots_, left_slots_;
};

/// Values held fixed by the caller, by slot (used to condition on a left-side
/// configuration). nullopt means "evaluate from the response vector".
using PinnedValues = std::vector<std::optional<int>>;

/// Value of `variable` determined by `r` through its ancestors.
int eval_response(const ResponseFunctionTable& t, const ResponseVector& r, std::size_t variable,
                  const PinnedValues* pinned = nullptr);

/// Value of `variable` when the listed interventions are applied. An
/// intervened variable takes its assigned value wherever it is read on a path
/// into `variable`; a nested setting such as M(X = 0) is evaluated in its own
/// scope. Variables that are not intervened on take their natural values
/// under the interventions upstream of them.
int eval_response_under_intervention(const ResponseFunctionTable& t, const ResponseVector& r,
                                     std::size_t variable, std::span<const Intervention> interventions,
                                     const PinnedValues* pinned = nullptr);

/// Convenience for evaluating a parsed counterfactual variable.
int eval_counterfactual(const ResponseFunctionTable& t, const ResponseVector& r, const CounterfactualVariable& v,
                        const PinnedValues* pinned = nullptr);

/// Observed variables whose response functions can influence the value of
/// `v` (those reached without passing through an intervention).
std::vector<std::size_t> counterfactual_dependencies(const CausalGraph& g, const CounterfactualVariable& v);

struct AdmissibleSets {
  /// Per slot, sorted admissible response indices.
  std::vector<std::vector<std::uint64_t>> per_slot;
  /// Constraints that couple several right-side variables; enforced jointly
  /// when enumerating response vectors.
  std::vector<ConstraintStatement> joint;

  bool operator==(const AdmissibleSets&) const = default;
};

/// Removes response functions that break a monotone edge (non-decreasing in
/// the parent) or an almost-sure constraint statement. A statement involving
/// a single right-side response function filters that variable; statements
/// involving several are kept for joint filtering. Throws Error(Infeasible)
/// when a variable has no admissible function left, and Error(Validation)
/// for statements about latent or left-side-only quantities.
AdmissibleSets admissible_response_indices(const ResponseFunctionTable& t,
                                           const std::vector<ConstraintStatement>& constraints);

/// Evaluates a constraint statement at one response vector and pinned
/// left-side configuration.
bool constraint_holds(const ResponseFunctionTable& t, const ResponseVector& r, const ConstraintStatement& c,
                      const PinnedValues* pinned = nullptr);

/// All assignments of the left-side observed variables (lexicographic, first
/// variable most significant) as pinned-value vectors.
std::vector<PinnedValues> left_configurations(const ResponseFunctionTable& t);

}  // namespace causalbounds
