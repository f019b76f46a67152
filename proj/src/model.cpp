#include "bunkbed/model.hpp"

#include <algorithm>

#include "bunkbed/errors.hpp"

namespace bunkbed {

std::size_t PercolationModel::index_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw InvalidInput("unknown vertex '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

PercolationModel percolation_model(const WeightedGraph& g) {
  PercolationModel m;
  m.labels = g.ids();
  m.edges.reserve(g.edge_count());
  for (const auto& e : g.edges())
    m.edges.push_back({static_cast<std::uint32_t>(e.u), static_cast<std::uint32_t>(e.v), e.p});
  return m;
}

PercolationModel percolation_model(const BunkbedGraph& b) { return percolation_model(b.doubled()); }

PercolationModel conditioned(const PercolationModel& model, const std::vector<EdgeState>& states) {
  if (states.size() != model.edges.size())
    throw InvalidInput("edge state vector does not match edge count");
  PercolationModel out = model;
  for (std::size_t e = 0; e < states.size(); ++e) {
    if (states[e] == EdgeState::open) out.edges[e].p = Probability::one();
    if (states[e] == EdgeState::closed) out.edges[e].p = Probability::zero();
  }
  return out;
}

PercolationModel conditioned(const PercolationModel& model,
                             const std::vector<std::pair<std::size_t, EdgeState>>& forced) {
  std::vector<EdgeState> states(model.edges.size(), EdgeState::free);
  for (auto [e, s] : forced) {
    if (e >= states.size()) throw InvalidInput("forced edge index out of range");
    states[e] = s;
  }
  return conditioned(model, states);
}

void ConnectivityEvent::validate(std::size_t vertex_count) const {
  auto check = [&](const VertexPair& p) {
    if (p.first >= vertex_count || p.second >= vertex_count)
      throw InvalidInput("event references an unknown vertex");
  };
  for (const auto& p : must_connect) check(p);
  for (const auto& p : must_separate) check(p);
  for (const auto& c : must_connect)
    for (const auto& s : must_separate)
      if ((c.first == s.first && c.second == s.second) || (c.first == s.second && c.second == s.first))
        throw InvalidInput("pair required both connected and separated");
}

ConnectivityEvent exact_pattern(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
  ConnectivityEvent e;
  e.must_connect = {{b, c}};
  e.must_separate = {{a, b}, {c, d}};
  return e;
}

}  // namespace bunkbed
