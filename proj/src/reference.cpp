#include <string>

#include "bunkbed/errors.hpp"
#include "bunkbed/exact.hpp"
#include "bunkbed/union_find.hpp"

namespace bunkbed {

std::vector<Rational> reference_event_probabilities(const PercolationModel& model,
                                                    std::span<const ConnectivityEvent> events,
                                                    std::size_t cap) {
  const std::size_t m = model.edges.size();
  if (m > cap)
    throw CapExceeded("reference enumeration limited to " + std::to_string(cap) + " edges", m, cap);
  for (const auto& ev : events) ev.validate(model.vertex_count());

  std::vector<Rational> totals(events.size(), 0);
  UnionFind uf;
  const std::uint64_t configurations = std::uint64_t{1} << m;
  for (std::uint64_t config = 0; config < configurations; ++config) {
    uf.reset(model.vertex_count());
    Rational weight = 1;
    for (std::size_t e = 0; e < m; ++e) {
      const auto& edge = model.edges[e];
      if (config >> e & 1) {
        weight *= edge.p.value();
        uf.unite(edge.a, edge.b);
      } else {
        weight *= edge.p.complement();
      }
    }
    if (sgn(weight) == 0) continue;
    for (std::size_t k = 0; k < events.size(); ++k) {
      bool holds = true;
      for (auto [a, b] : events[k].must_connect) holds = holds && uf.connected(a, b);
      for (auto [a, b] : events[k].must_separate) holds = holds && !uf.connected(a, b);
      if (holds) totals[k] += weight;
    }
  }
  return totals;
}

}  // namespace bunkbed
