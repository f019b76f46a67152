#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bunkbed/graph.hpp"

namespace bunkbed {

enum class GraphClass {
  complete,
  complete_bipartite,
  complete_kpartite,
  complete_minus_clique,
  cycle,
  hypercube,
  petersen,
};

/// How vertical edges are weighted: constant p (the P_p model), 1 on a subset
/// H and 0 elsewhere (P_{p,H}), or an explicit per-vertex map.
struct VerticalSpec {
  enum class Kind { constant, subset, explicit_map };
  Kind kind = Kind::constant;
  std::vector<VertexId> subset;
  std::map<VertexId, Probability> weights;

  static VerticalSpec constant() { return {}; }
  static VerticalSpec on_subset(std::vector<VertexId> h) {
    return {Kind::subset, std::move(h), {}};
  }
};

struct ClassSpec {
  GraphClass kind = GraphClass::complete;
  std::vector<std::size_t> sizes;
  Probability p;
  /// Weight inside V_2 for complete_minus_clique; defaults to p.
  std::optional<Probability> p_prime;
  VerticalSpec vertical;
};

/// Parses the class grammar: complete:n, complete_bipartite:n1,n2,
/// complete_kpartite:k,m, complete_minus_clique:n,s[,pprime=RAT], cycle:n,
/// hypercube:d, petersen. Weights are filled from `p`.
ClassSpec parse_class_spec(std::string_view text, Probability p = {});
std::string to_string(const ClassSpec& spec);
std::string_view class_name(GraphClass kind);

WeightedGraph generate(const ClassSpec& spec);

/// Vertex ids used by the generators for partite classes: "V<part>_<index>",
/// with parts numbered from 1.
VertexId partite_id(std::size_t part, std::size_t index);

/// For partite classes, the part (1-based) each vertex of `generate(spec)`
/// belongs to; empty for other classes.
std::vector<std::size_t> partite_parts(const ClassSpec& spec);

}  // namespace bunkbed
