#include "bunkbed/symmetry.hpp"

#include <algorithm>
#include <numeric>

#include "bunkbed/errors.hpp"

namespace bunkbed {

namespace {

struct AutomorphismSearch {
  const WeightedGraph& g;
  std::size_t n;
  std::vector<std::vector<Rational>> weight;       // dense pairwise weights
  std::vector<std::vector<Rational>> signature;    // sorted incident weights
  Permutation image;
  std::vector<bool> used;
  std::vector<std::size_t> order;

  explicit AutomorphismSearch(const WeightedGraph& graph)
      : g(graph), n(graph.vertex_count()), weight(n, std::vector<Rational>(n)), signature(n),
        image(n, n), used(n, false) {
    for (const auto& e : g.edges()) {
      weight[e.u][e.v] = e.p.value();
      weight[e.v][e.u] = e.p.value();
    }
    for (std::size_t i = 0; i < n; ++i) {
      signature[i] = weight[i];
      signature[i].erase(signature[i].begin() + static_cast<std::ptrdiff_t>(i));
      std::sort(signature[i].begin(), signature[i].end());
    }
  }

  bool compatible(std::size_t x, std::size_t y) const {
    return g.vertex_weight(x) == g.vertex_weight(y) && signature[x] == signature[y];
  }

  bool consistent(std::size_t x, std::size_t y) const {
    for (std::size_t z = 0; z < n; ++z) {
      if (image[z] == n || z == x) continue;
      if (weight[x][z] != weight[y][image[z]]) return false;
    }
    return true;
  }

  bool extend(std::size_t depth) {
    if (depth == order.size()) return true;
    const std::size_t x = order[depth];
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || !compatible(x, y)) continue;
      image[x] = y;
      if (consistent(x, y)) {
        used[y] = true;
        if (extend(depth + 1)) return true;
        used[y] = false;
      }
      image[x] = n;
    }
    return false;
  }
};

}  // namespace

bool is_weighted_automorphism(const WeightedGraph& g, std::span<const std::size_t> perm) {
  const std::size_t n = g.vertex_count();
  if (perm.size() != n) throw PreconditionError("permutation size does not match vertex count");
  std::vector<bool> hit(n, false);
  for (auto y : perm) {
    if (y >= n || hit[y]) throw PreconditionError("permutation is not a bijection on V");
    hit[y] = true;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (g.vertex_weight(perm[i]) != g.vertex_weight(i)) return false;
  for (const auto& e : g.edges())
    if (g.weight_between(perm[e.u], perm[e.v]) != e.p) return false;
  // Non-edges must not be mapped onto edges of positive weight.
  Permutation inverse(n);
  for (std::size_t i = 0; i < n; ++i) inverse[perm[i]] = i;
  for (const auto& e : g.edges())
    if (g.weight_between(inverse[e.u], inverse[e.v]) != e.p) return false;
  return true;
}

std::optional<Permutation> find_weighted_automorphism(
    const WeightedGraph& g, std::span<const std::pair<std::size_t, std::size_t>> fixed) {
  AutomorphismSearch search(g);
  for (auto [x, y] : fixed) {
    if (x >= search.n || y >= search.n) throw PreconditionError("vertex out of range");
    if (search.image[x] != search.n) {
      if (search.image[x] != y) return std::nullopt;
      continue;
    }
    if (search.used[y] || !search.compatible(x, y)) return std::nullopt;
    search.image[x] = y;
    if (!search.consistent(x, y)) return std::nullopt;
    search.used[y] = true;
  }
  for (std::size_t x = 0; x < search.n; ++x)
    if (search.image[x] == search.n) search.order.push_back(x);
  if (!search.extend(0)) return std::nullopt;
  return search.image;
}

Permutation transposition(std::size_t n, std::size_t a, std::size_t b) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 0);
  std::swap(p.at(a), p.at(b));
  return p;
}

bool thm1_hypothesis(const WeightedGraph& g, std::size_t v, std::size_t w) {
  if (v == w) throw PreconditionError("v and w must differ");
  for (const auto& e : g.edges())
    if (e.p.is_one())
      throw PreconditionError("edge '" + g.id(e.u) + "'-'" + g.id(e.v) +
                              "' has weight 1; normalize the graph first");
  if (g.weight_between(v, w).is_zero()) return false;
  if (g.vertex_weight(v).is_one() || g.vertex_weight(w).is_one()) return true;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (u == w || u == v) continue;
    if (g.weight_between(u, w).is_zero() || g.vertex_weight(u).is_one()) continue;
    const std::pair<std::size_t, std::size_t> keep_w[] = {{v, u}, {w, w}};
    const std::pair<std::size_t, std::size_t> swap_w[] = {{v, w}, {w, u}};
    if (!find_weighted_automorphism(g, keep_w) && !find_weighted_automorphism(g, swap_w))
      return false;
  }
  return true;
}

bool thm2_hypothesis(const WeightedGraph& g, std::size_t v, std::size_t w) {
  if (v == w) throw PreconditionError("v and w must differ");
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (u == v || u == w) continue;
    if (g.weight_between(v, u) != g.weight_between(w, u)) return false;
  }
  return true;
}

bool check_reflection_automorphism(const BunkbedGraph& b) {
  return is_weighted_automorphism(b.doubled(), b.layer_swap());
}

}  // namespace bunkbed
