#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bunkbed/graph.hpp"

namespace bunkbed {

/// perm[i] is the image of vertex i.
using Permutation = std::vector<std::size_t>;

/// True iff `perm` preserves every vertex weight and every pairwise weight
/// (absent edges count as weight 0). Throws PreconditionError unless `perm`
/// is a bijection on the vertices of g.
bool is_weighted_automorphism(const WeightedGraph& g, std::span<const std::size_t> perm);

/// Backtracking search for a weighted automorphism extending the given
/// partial assignment (pairs of vertex -> image). Intended for |V| <= 12.
std::optional<Permutation> find_weighted_automorphism(
    const WeightedGraph& g, std::span<const std::pair<std::size_t, std::size_t>> fixed);

Permutation transposition(std::size_t n, std::size_t a, std::size_t b);

/// Local-symmetry hypothesis for neighboring vertices: p_vw > 0 and, unless
/// p_v = 1 or p_w = 1, every u with p_uw > 0 and p_u != 1 admits a weighted
/// automorphism mapping the pair {v,w} onto {u,w}.
/// Throws PreconditionError if v == w or any edge has weight 1.
bool thm1_hypothesis(const WeightedGraph& g, std::size_t v, std::size_t w);

/// Same-neighbor hypothesis: p_vu = p_wu for every u outside {v,w}.
/// Throws PreconditionError if v == w.
bool thm2_hypothesis(const WeightedGraph& g, std::size_t v, std::size_t w);

/// Checks that exchanging the two layers is a weighted automorphism.
bool check_reflection_automorphism(const BunkbedGraph& b);

}  // namespace bunkbed
