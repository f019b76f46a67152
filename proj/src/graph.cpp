#include "bunkbed/graph.hpp"

#include <algorithm>
#include <numeric>

#include "bunkbed/errors.hpp"

namespace bunkbed {

std::size_t WeightedGraph::add_vertex(VertexId id, Probability p) {
  if (index_.contains(id)) throw InvalidInput("duplicate vertex '" + id + "'");
  std::size_t i = ids_.size();
  index_.emplace(id, i);
  ids_.push_back(std::move(id));
  vertex_weights_.push_back(std::move(p));
  return i;
}

std::size_t WeightedGraph::add_edge(std::size_t u, std::size_t v, Probability p) {
  if (u >= ids_.size() || v >= ids_.size()) throw InvalidInput("edge endpoint out of range");
  if (u == v) throw InvalidInput("loop at vertex '" + ids_[u] + "'");
  auto k = key(u, v);
  if (edge_index_.contains(k))
    throw InvalidInput("duplicate edge '" + ids_[u] + "'-'" + ids_[v] + "'");
  std::size_t e = edges_.size();
  edge_index_.emplace(k, e);
  edges_.push_back({u, v, std::move(p)});
  return e;
}

std::size_t WeightedGraph::add_edge(const VertexId& u, const VertexId& v, Probability p) {
  return add_edge(index_of(u), index_of(v), std::move(p));
}

std::size_t WeightedGraph::index_of(const VertexId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw InvalidInput("unknown vertex '" + id + "'");
  return it->second;
}

std::optional<std::size_t> WeightedGraph::find(const VertexId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> WeightedGraph::find_edge(std::size_t u, std::size_t v) const {
  auto it = edge_index_.find(key(u, v));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

Probability WeightedGraph::weight_between(std::size_t u, std::size_t v) const {
  if (auto e = find_edge(u, v)) return edges_[*e].p;
  return Probability::zero();
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.ids_ != b.ids_ || a.vertex_weights_ != b.vertex_weights_) return false;
  if (a.edges_.size() != b.edges_.size()) return false;
  for (const auto& e : a.edges_) {
    auto f = b.find_edge(e.u, e.v);
    if (!f || b.edges_[*f].p != e.p) return false;
  }
  return true;
}

std::string upper_label(const VertexId& id) { return id + "+"; }
std::string lower_label(const VertexId& id) { return id + "-"; }

BunkbedGraph::BunkbedGraph(WeightedGraph base) : base_(std::move(base)) {
  const std::size_t n = base_.vertex_count();
  for (std::size_t i = 0; i < n; ++i) doubled_.add_vertex(upper_label(base_.id(i)));
  for (std::size_t i = 0; i < n; ++i) doubled_.add_vertex(lower_label(base_.id(i)));
  for (const auto& e : base_.edges()) doubled_.add_edge(e.u, e.v, e.p);
  for (const auto& e : base_.edges()) doubled_.add_edge(n + e.u, n + e.v, e.p);
  for (std::size_t i = 0; i < n; ++i) doubled_.add_edge(i, n + i, base_.vertex_weight(i));
}

BunkbedGraph BunkbedGraph::from_parts(WeightedGraph base, WeightedGraph doubled) {
  const std::size_t n = base.vertex_count();
  if (doubled.vertex_count() != 2 * n ||
      doubled.edge_count() != 2 * base.edge_count() + n)
    throw InvalidInput("doubled graph does not have bunkbed dimensions");
  for (std::size_t i = 0; i < n; ++i) {
    if (doubled.id(i) != upper_label(base.id(i)) || doubled.id(n + i) != lower_label(base.id(i)))
      throw InvalidInput("doubled graph vertex layout mismatch at '" + base.id(i) + "'");
    if (!doubled.find_edge(i, n + i))
      throw InvalidInput("doubled graph lacks vertical edge at '" + base.id(i) + "'");
  }
  for (const auto& e : base.edges()) {
    if (!doubled.find_edge(e.u, e.v) || !doubled.find_edge(n + e.u, n + e.v))
      throw InvalidInput("doubled graph lacks a horizontal copy of a base edge");
  }
  BunkbedGraph b;
  b.base_ = std::move(base);
  b.doubled_ = std::move(doubled);
  return b;
}

std::vector<std::size_t> BunkbedGraph::layer_swap() const {
  const std::size_t n = base_size();
  std::vector<std::size_t> perm(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    perm[i] = n + i;
    perm[n + i] = i;
  }
  return perm;
}

BunkbedGraph build_bunkbed(const WeightedGraph& g) { return BunkbedGraph(g); }

Normalization normalize_mapped(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& e : g.edges()) {
    if (!e.p.is_one()) continue;
    auto a = find(e.u), b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }

  // Classes are numbered by their smallest member, in base order.
  Normalization out;
  out.class_of.assign(n, 0);
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> class_index(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto r = find(i);
    if (class_index[r] == n) {
      class_index[r] = members.size();
      members.emplace_back();
    }
    out.class_of[i] = class_index[r];
    members[class_index[r]].push_back(i);
  }

  for (const auto& m : members) {
    VertexId id = g.id(m.front());
    Rational closed = 1;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k > 0) id += "|" + g.id(m[k]);
      closed *= g.vertex_weight(m[k]).complement();
    }
    out.graph.add_vertex(std::move(id), Probability(1 - closed));
  }

  // Parallel edges merge by complement product; edges inside a class vanish.
  std::map<std::pair<std::size_t, std::size_t>, Rational> closed_prob;
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (const auto& e : g.edges()) {
    if (e.p.is_zero()) continue;
    auto a = out.class_of[e.u], b = out.class_of[e.v];
    if (a == b) continue;
    auto k = a < b ? std::pair{a, b} : std::pair{b, a};
    auto [it, fresh] = closed_prob.try_emplace(k, 1);
    if (fresh) order.push_back(k);
    it->second *= e.p.complement();
  }
  for (const auto& k : order) out.graph.add_edge(k.first, k.second, Probability(1 - closed_prob[k]));
  return out;
}

WeightedGraph normalize(const WeightedGraph& g) { return normalize_mapped(g).graph; }

}  // namespace bunkbed
