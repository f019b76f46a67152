#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bunkbed/rational.hpp"

namespace bunkbed {

using VertexId = std::string;

struct WeightedEdge {
  std::size_t u;
  std::size_t v;
  Probability p;
};

/// Finite simple graph with a probability on every edge (p_uv) and on every
/// vertex (p_u, the weight of the vertical edge u_+u_- in the bunkbed).
///
/// Vertices are addressed by index in insertion order; ids are kept for I/O.
/// A missing edge behaves like an edge of weight 0 in weight_between().
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t add_vertex(VertexId id, Probability p = {});
  std::size_t add_edge(std::size_t u, std::size_t v, Probability p);
  std::size_t add_edge(const VertexId& u, const VertexId& v, Probability p);

  std::size_t vertex_count() const noexcept { return ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<VertexId>& ids() const noexcept { return ids_; }
  const VertexId& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<WeightedEdge>& edges() const noexcept { return edges_; }

  /// Throws InvalidInput for unknown ids.
  std::size_t index_of(const VertexId& id) const;
  std::optional<std::size_t> find(const VertexId& id) const;

  const Probability& vertex_weight(std::size_t i) const { return vertex_weights_.at(i); }
  void set_vertex_weight(std::size_t i, Probability p) { vertex_weights_.at(i) = std::move(p); }
  void set_edge_weight(std::size_t edge, Probability p) { edges_.at(edge).p = std::move(p); }

  std::optional<std::size_t> find_edge(std::size_t u, std::size_t v) const;
  /// p_uv, or 0 when u and v are not adjacent.
  Probability weight_between(std::size_t u, std::size_t v) const;

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

 private:
  static std::pair<std::size_t, std::size_t> key(std::size_t u, std::size_t v) {
    return u < v ? std::pair{u, v} : std::pair{v, u};
  }

  std::vector<VertexId> ids_;
  std::vector<Probability> vertex_weights_;
  std::vector<WeightedEdge> edges_;
  std::unordered_map<VertexId, std::size_t> index_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_index_;
};

enum class Layer { upper, lower };

/// The double graph G^±. Vertex i of the base appears as i (upper, "+") and
/// n + i (lower, "-"). Edge order: upper horizontals, lower horizontals, then
/// verticals, each in base order.
class BunkbedGraph {
 public:
  explicit BunkbedGraph(WeightedGraph base);

  /// Wraps a hand-built double graph. The doubled graph must use the vertex
  /// layout above; its weights are taken as given (no symmetry enforced).
  static BunkbedGraph from_parts(WeightedGraph base, WeightedGraph doubled);

  const WeightedGraph& base() const noexcept { return base_; }
  const WeightedGraph& doubled() const noexcept { return doubled_; }

  std::size_t base_size() const noexcept { return base_.vertex_count(); }
  std::size_t vertex(std::size_t base_vertex, Layer layer) const {
    return layer == Layer::upper ? base_vertex : base_size() + base_vertex;
  }
  std::size_t upper(std::size_t base_vertex) const { return vertex(base_vertex, Layer::upper); }
  std::size_t lower(std::size_t base_vertex) const { return vertex(base_vertex, Layer::lower); }

  /// Index of the vertical edge u_+u_- in doubled().edges().
  std::size_t vertical_edge(std::size_t base_vertex) const {
    return 2 * base_.edge_count() + base_vertex;
  }
  /// Indices of u_+v_+ and u_-v_- for base edge e.
  std::pair<std::size_t, std::size_t> horizontal_edges(std::size_t base_edge) const {
    return {base_edge, base_.edge_count() + base_edge};
  }

  /// Permutation of doubled() vertices exchanging the two layers.
  std::vector<std::size_t> layer_swap() const;

 private:
  BunkbedGraph() = default;
  WeightedGraph base_;
  WeightedGraph doubled_;
};

BunkbedGraph build_bunkbed(const WeightedGraph& g);

std::string upper_label(const VertexId& id);
std::string lower_label(const VertexId& id);

/// Result of removing weight-0 edges and contracting weight-1 edges.
struct Normalization {
  WeightedGraph graph;
  /// class_of[i] = vertex of `graph` that original vertex i was merged into.
  std::vector<std::size_t> class_of;
};

Normalization normalize_mapped(const WeightedGraph& g);
WeightedGraph normalize(const WeightedGraph& g);

}  // namespace bunkbed
