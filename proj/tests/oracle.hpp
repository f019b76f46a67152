#pragma once

// Brute-force oracle for tests: walks all 2^m edge configurations of a small
// model and checks events with a plain graph search. Shares no code with the
// engines beyond the model types.

#include <cstdint>
#include <vector>

#include "bunkbed/model.hpp"
#include "bunkbed/rational.hpp"

namespace oracle {

inline std::vector<int> components(std::size_t n, const bunkbed::PercolationModel& m, std::uint64_t open) {
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    comp[s] = next;
    while (!stack.empty()) {
      const auto x = stack.back();
      stack.pop_back();
      for (std::size_t e = 0; e < m.edges.size(); ++e) {
        if (!(open >> e & 1u)) continue;
        std::size_t y;
        if (m.edges[e].a == x) y = m.edges[e].b;
        else if (m.edges[e].b == x) y = m.edges[e].a;
        else continue;
        if (comp[y] < 0) {
          comp[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline bunkbed::Rational probability(const bunkbed::PercolationModel& m, const bunkbed::ConnectivityEvent& ev) {
  const std::size_t k = m.edges.size();
  bunkbed::Rational total = 0;
  for (std::uint64_t open = 0; open < (std::uint64_t{1} << k); ++open) {
    bunkbed::Rational w = 1;
    for (std::size_t e = 0; e < k; ++e) w *= (open >> e & 1u) ? m.edges[e].p.value() : m.edges[e].p.complement();
    if (w == 0) continue;
    const auto comp = components(m.vertex_count(), m, open);
    bool ok = true;
    for (auto [a, b] : ev.must_connect) ok = ok && comp[a] == comp[b];
    for (auto [a, b] : ev.must_separate) ok = ok && comp[a] != comp[b];
    if (ok) total += w;
  }
  return total;
}

}  // namespace oracle
