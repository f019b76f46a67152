#pragma once

#include <chrono>
#include <cstdint>
#include <span>
#include <vector>

#include "bunkbed/graph.hpp"
#include "bunkbed/model.hpp"
#include "bunkbed/rational.hpp"

namespace bunkbed {

struct EngineOptions {
  /// Maximum number of free edges (weights strictly between 0 and 1).
  std::size_t cap = 30;
  /// OpenMP threads; 0 selects the runtime default.
  int workers = 0;
};

struct ExactResult {
  Rational probability;
  /// Leaves of the enumeration tree actually visited.
  std::uint64_t configurations_evaluated = 0;
  std::chrono::nanoseconds elapsed{0};
};

struct ExactBatch {
  std::vector<Rational> probabilities;
  std::uint64_t configurations_evaluated = 0;
  std::chrono::nanoseconds elapsed{0};
};

/// Number of edges left after dropping weight-0 and contracting weight-1 edges.
std::size_t free_edge_count(const PercolationModel& model);
/// 2^free_edge_count, the size of the configuration space.
double expected_configurations(const PercolationModel& model);

/// Exact probabilities of several events in one enumeration pass.
/// Throws CapExceeded when the model has more than options.cap free edges.
ExactBatch event_probabilities(const PercolationModel& model, std::span<const ConnectivityEvent> events,
                               const EngineOptions& options = {});

ExactResult event_probability(const PercolationModel& model, const ConnectivityEvent& event,
                              const EngineOptions& options = {});
ExactResult event_probability(const PercolationModel& model, const ConnectivityEvent& event,
                              const std::vector<EdgeState>& states, const EngineOptions& options = {});

/// P(a ↔ c) for bunkbed vertices a and c.
Rational connection_probability(const BunkbedGraph& b, std::size_t a, std::size_t c,
                                const EngineOptions& options = {});

/// The connection and exact-pattern probabilities for a base pair (v, w),
/// all from one enumeration.
struct PairQuantities {
  Rational lower_lower;  // P(v- ↔ w-)
  Rational lower_upper;  // P(v- ↔ w+)
  Rational upper_upper;  // P(v+ ↔ w+)
  Rational upper_lower;  // P(v+ ↔ w-)
  // Exact patterns, positive pair first:
  //   v- ≁ v+ ↔ w+ ≁ w-,  v+ ≁ v- ↔ w- ≁ w+,
  //   v- ≁ v+ ↔ w- ≁ w+,  v+ ≁ v- ↔ w+ ≁ w-.
  Rational patterns[4];

  Rational gap() const { return lower_lower - lower_upper; }
  Rational four_point_d() const { return upper_upper + lower_lower - upper_lower - lower_upper; }
  Rational pattern_d() const { return patterns[0] + patterns[1] - patterns[2] - patterns[3]; }
};

/// Events of PairQuantities in declaration order (connections, then patterns).
std::vector<ConnectivityEvent> pair_events(const BunkbedGraph& b, std::size_t v, std::size_t w);

PairQuantities pair_quantities(const BunkbedGraph& b, std::size_t v, std::size_t w,
                               const EngineOptions& options = {});
/// Same, for a model laid out like b.doubled() but with altered weights.
PairQuantities pair_quantities(const BunkbedGraph& b, const PercolationModel& model, std::size_t v,
                               std::size_t w, const EngineOptions& options = {});

/// P(v- ↔ w-) - P(v- ↔ w+) for base vertices v and w.
Rational bunkbed_gap(const BunkbedGraph& b, std::size_t v, std::size_t w, const EngineOptions& options = {});
/// P(v+↔w+) + P(v-↔w-) - P(v+↔w-) - P(v-↔w+).
Rational four_point_d(const BunkbedGraph& b, std::size_t v, std::size_t w, const EngineOptions& options = {});
/// The same quantity written with the four exact patterns.
Rational pattern_d(const BunkbedGraph& b, std::size_t v, std::size_t w, const EngineOptions& options = {});

/// Per-event tallies over a symbolic weight assignment: every free edge
/// belongs to a weight class, and the tallies can be evaluated for any
/// class values afterwards.
class EventTallies {
 public:
  std::size_t event_count() const { return counts_.size(); }
  std::size_t class_count() const { return open_.empty() ? 0 : open_.front().size(); }
  std::uint64_t configurations_evaluated() const { return leaves_; }

  Rational evaluate(std::size_t event, std::span<const Rational> class_values) const;

  /// Nonzero histogram cells of one event: (open counts, closed counts, count).
  struct Cell {
    std::vector<std::size_t> open;
    std::vector<std::size_t> closed;
    std::uint64_t count;
  };
  std::vector<Cell> cells(std::size_t event) const;

 private:
  friend EventTallies tally_events(const PercolationModel&, std::span<const std::uint32_t>, std::size_t,
                                   std::span<const ConnectivityEvent>, const EngineOptions&);
  std::vector<std::vector<std::size_t>> open_, closed_;  // per used cell
  std::vector<std::vector<std::uint64_t>> counts_;        // per event, per used cell
  std::uint64_t leaves_ = 0;
};

/// edge_class[e] < class_count assigns edge e to a symbolic class; the
/// sentinels enumeration::kForcedOpen / kForcedClosed fix its state.
EventTallies tally_events(const PercolationModel& structure, std::span<const std::uint32_t> edge_class,
                          std::size_t class_count, std::span<const ConnectivityEvent> events,
                          const EngineOptions& options = {});

/// Serial reference: iterates every configuration index of every edge,
/// rebuilds connectivity from scratch and sums exact rational products.
/// Kept independent of the enumeration kernels for cross-checking.
std::vector<Rational> reference_event_probabilities(const PercolationModel& model,
                                                    std::span<const ConnectivityEvent> events,
                                                    std::size_t cap = 22);

}  // namespace bunkbed
