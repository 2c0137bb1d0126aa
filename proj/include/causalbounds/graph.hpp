#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causalbounds/error.hpp"

namespace causalbounds {

enum class Side { Left, Right };

struct VariableSpec {
  std::string name;
  Side side = Side::Right;
  int cardinality = 2;
  bool latent = false;
  bool exposure = false;
  bool outcome = false;

  bool operator==(const VariableSpec&) const = default;
};

struct EdgeSpec {
  std::string from;
  std::string to;
  bool monotone = false;

  bool operator==(const EdgeSpec&) const = default;
};

/// A two-sided causal DAG. Declaration order of `variables` is the canonical
/// variable order used for parameter names and response-vector encoding.
class CausalGraph {
 public:
  CausalGraph() = default;
  CausalGraph(std::vector<VariableSpec> variables, std::vector<EdgeSpec> edges, bool augmented = false);

  const std::vector<VariableSpec>& variables() const { return variables_; }
  const std::vector<EdgeSpec>& edges() const { return edges_; }
  bool augmented() const { return augmented_; }

  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws Error if the name is not declared.
  std::size_t index_of(std::string_view name) const;
  const VariableSpec& variable(std::size_t i) const { return variables_[i]; }
  const VariableSpec& variable(std::string_view name) const { return variables_[index_of(name)]; }

  /// Observed parents of variable i, in canonical order.
  std::vector<std::size_t> observed_parents(std::size_t i) const;
  /// All parents (observed or latent), in canonical order.
  std::vector<std::size_t> parents(std::size_t i) const;
  std::vector<std::size_t> children(std::size_t i) const;

  /// Observed variables on the given side, canonical order.
  std::vector<std::size_t> observed(Side side) const;
  std::vector<std::size_t> observed() const;

  bool is_monotone_edge(std::size_t from, std::size_t to) const;
  /// True if a directed path from -> ... -> to exists (length >= 1).
  bool has_directed_path(std::size_t from, std::size_t to) const;
  /// Number of edges on the longest directed path in the graph.
  std::size_t longest_path_length() const;
  /// Canonical-order indices in a topological order; empty optional on a cycle.
  std::optional<std::vector<std::size_t>> topological_order() const;

  std::optional<std::size_t> exposure() const;
  std::optional<std::size_t> outcome() const;

  bool operator==(const CausalGraph&) const = default;

 private:
  std::vector<VariableSpec> variables_;
  std::vector<EdgeSpec> edges_;
  bool augmented_ = false;
};

/// Parses the line-oriented graph document:
///
///   # comment
///   node NAME [side=left|right] [card=K] [latent] [exposure] [outcome]
///   edge A -> B [monotone]
///
/// Throws Error (Syntax) with line/column on malformed input, duplicate
/// declarations, undeclared edge endpoints or a cycle.
CausalGraph parse_graph_spec(std::string_view text);

/// Canonical text form; parse_graph_spec(format_graph_spec(g)) == g for
/// unaugmented graphs. Latent nodes of augmented graphs are written out
/// explicitly, so ensure_augmented() on the re-parsed graph restores them.
std::string format_graph_spec(const CausalGraph& g);

/// Reports every structural problem; never throws.
ValidationReport validate_graph(const CausalGraph& g);

/// Adds latent Ur -> every right observed variable and, when the left side is
/// nonempty, Ul -> every left observed variable. Throws if already augmented
/// or invalid.
CausalGraph augment_confounders(const CausalGraph& g);

/// augment_confounders unless the graph already declares its latent
/// confounders explicitly, in which case it is validated and marked augmented.
CausalGraph ensure_augmented(const CausalGraph& g);

}  // namespace causalbounds
