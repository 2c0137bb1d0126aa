#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "causalbounds/cancel.hpp"
#include "causalbounds/rational.hpp"

namespace causalbounds {

/// {y : A y <= b}; rows flagged in `equality` are read as A_i y = b_i.
struct HPolyhedron {
  RationalMatrix a;
  RationalVector b;
  std::vector<bool> equality;  // empty, or one flag per row
  std::size_t dimension = 0;

  HPolyhedron() = default;
  HPolyhedron(RationalMatrix a_, RationalVector b_, std::size_t dim);

  std::size_t rows() const { return a.size(); }
  bool is_equality(std::size_t i) const { return i < equality.size() && equality[i]; }
  /// Throws std::invalid_argument on ragged rows or a length mismatch.
  void check() const;
  bool contains(const RationalVector& y) const;
};

/// Minimal generators: P = conv(vertices) + cone(rays) + lin(lineality).
/// When P has a nontrivial lineality space, each "vertex" is a point of a
/// minimal face. Lists are sorted lexicographically.
struct VRepresentation {
  RationalMatrix vertices;
  RationalMatrix rays;
  RationalMatrix lineality;

  bool empty() const { return vertices.empty(); }
  bool operator==(const VRepresentation&) const = default;
};

struct DDStats {
  std::size_t max_intermediate_rays = 0;
  std::size_t adjacency_tests = 0;
};

/// Double description method over exact integers. Halfspaces are inserted in
/// row order after the homogenizing row; adjacency is decided by the rank of
/// the common tight rows. An infeasible region yields an empty result.
VRepresentation dd_vertex_enumeration(const HPolyhedron& h, const CancelToken& cancel = {}, DDStats* stats = nullptr);

/// Debug dump: a header line "H <rows> <dim>" then one row per line as
/// "b a_1 ... a_d" (equality rows prefixed with "="), rationals as n/d.
std::string format_hrep(const HPolyhedron& h);
HPolyhedron parse_hrep(std::string_view text);

/// "V <vertices> <rays> <lineality> <dim>", then lines "v ...", "r ...", "l ...".
std::string format_vrep(const VRepresentation& v, std::size_t dimension);
VRepresentation parse_vrep(std::string_view text);

}  // namespace causalbounds
