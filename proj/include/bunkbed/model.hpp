#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bunkbed/graph.hpp"

namespace bunkbed {

/// Independent bond percolation on a finite multigraph. Parallel edges are
/// allowed (they arise when clusters are contracted); loops are not.
struct PercolationModel {
  struct Edge {
    std::uint32_t a;
    std::uint32_t b;
    Probability p;
  };

  std::vector<std::string> labels;
  std::vector<Edge> edges;

  std::size_t vertex_count() const noexcept { return labels.size(); }
  std::size_t index_of(const std::string& label) const;
};

/// Percolation on the edges of g (vertex weights are ignored).
PercolationModel percolation_model(const WeightedGraph& g);
/// Percolation on the double graph G^±.
PercolationModel percolation_model(const BunkbedGraph& b);

enum class EdgeState : std::uint8_t { free, open, closed };

/// Forced-closed edges get weight 0 and forced-open edges weight 1, so that
/// event probabilities are conditional on those edge states.
PercolationModel conditioned(const PercolationModel& model, const std::vector<EdgeState>& states);
PercolationModel conditioned(const PercolationModel& model,
                             const std::vector<std::pair<std::size_t, EdgeState>>& forced);

using VertexPair = std::pair<std::uint32_t, std::uint32_t>;

/// All pairs in must_connect joined by open paths, no pair in must_separate.
struct ConnectivityEvent {
  std::vector<VertexPair> must_connect;
  std::vector<VertexPair> must_separate;

  static ConnectivityEvent connect(std::uint32_t a, std::uint32_t b) { return {{{a, b}}, {}}; }
  static ConnectivityEvent separate(std::uint32_t a, std::uint32_t b) { return {{}, {{a, b}}}; }

  /// Throws InvalidInput for out-of-range vertices or a pair required both
  /// connected and separated.
  void validate(std::size_t vertex_count) const;
};

/// x ↔ y ↔ z chains as used for the four exact patterns: "a ≁ b ↔ c ≁ d"
/// means b↔c, a not joined to b, d not joined to c.
ConnectivityEvent exact_pattern(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d);

}  // namespace bunkbed
