#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "bunkbed/exact.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/model.hpp"
#include "bunkbed/rational.hpp"
#include "bunkbed/report.hpp"

namespace bunkbed {

/// Default cap on the number of reduced edges enumerated for partitions.
inline constexpr std::size_t kPartitionCap = 24;
/// Maximum number of clusters that can attach to W in the J,K,L sum.
inline constexpr std::size_t kMaxActiveClusters = 12;

/// Clusters induced by the open edges among the non-excluded vertices,
/// together with P(A_C). Clusters are sorted and listed by smallest vertex.
struct ClusterPartition {
  std::vector<std::vector<std::uint32_t>> clusters;
  Rational probability;
};

/// All achievable partitions of the vertices outside `excluded`, found by
/// enumerating the edges with both endpoints outside `excluded`.
std::vector<ClusterPartition> enumerate_partitions(const PercolationModel& model,
                                                   std::span<const std::uint32_t> excluded,
                                                   const EngineOptions& options = {kPartitionCap, 0});
std::vector<ClusterPartition> enumerate_partitions(const BunkbedGraph& b, std::span<const std::uint32_t> excluded,
                                                   const EngineOptions& options = {kPartitionCap, 0});

/// p[i][k] = P_C(marked[k] ~ C_i): some edge from marked[k] into C_i is open.
struct AttachProbs {
  std::vector<std::uint32_t> marked;
  std::vector<std::vector<Rational>> p;
};

/// Throws PreconditionError if a marked vertex lies in a cluster.
AttachProbs attach_probs(const PercolationModel& model, const ClusterPartition& partition,
                         std::span<const std::uint32_t> marked);

/// P_C(A_i = W') for the attach row of one cluster; bit k of `subset` selects marked[k].
Rational attach_pattern_probability(std::span<const Rational> row, std::uint32_t subset);
/// P_C(|A_i| <= 1).
Rational attach_at_most_one(std::span<const Rational> row);

// Twin-vertex side ---------------------------------------------------------------

/// Marked order used for W: v-, v+, w-, w+.
enum WIndex : std::uint32_t { kVMinus = 0, kVPlus = 1, kWMinus = 2, kWPlus = 3 };
using MarkedW = std::array<std::uint32_t, 4>;
MarkedW marked_w(const BunkbedGraph& b, std::size_t v, std::size_t w);

/// True iff p_i(v+) = p_i(w+) and p_i(v-) = p_i(w-) for this W-ordered row.
bool symmetric_row(std::span<const Rational> row);

struct DklForms {
  Rational four_product;
  Rational squared;
};

/// Both forms of d_{K,L} for W-ordered attach rows of the clusters in K and L.
/// Throws SymmetryViolation if some row is not symmetric.
DklForms d_KL_forms(std::span<const std::vector<Rational>> k_rows, std::span<const std::vector<Rational>> l_rows);
/// The common value; throws std::logic_error if the forms disagree.
Rational d_KL(std::span<const std::vector<Rational>> k_rows, std::span<const std::vector<Rational>> l_rows);

/// The model with Z_v = Z_w = 0 and both copies of vw closed.
PercolationModel thm2_conditioned(const BunkbedGraph& b, std::size_t v, std::size_t w);

struct DcThm2 {
  Rational via_sum;        // sum over J,K,L of p_J(<=1) d_{K,L}
  Rational via_squares;    // same sum with d_{K,L} in squared form
  Rational direct;         // four patterns conditioned on A_C, by enumeration
  AttachProbs attach;
  std::size_t active_clusters = 0;
  bool agree() const { return via_sum == direct && via_squares == direct; }
};

/// Requires every edge among W to have weight 0 in `model`.
DcThm2 d_C_thm2(const PercolationModel& model, const MarkedW& w_vertices, const ClusterPartition& partition,
                const EngineOptions& options = {});

/// Checks the twin-vertex argument on (g, v, w): cancellation, conditioning,
/// partition decomposition, d_C >= 0, and the resulting gap >= 0.
/// Throws HypothesisFailure unless thm2_hypothesis(g, v, w).
VerificationReport verify_thm2_decomposition(const WeightedGraph& g, std::size_t v, std::size_t w,
                                             const EngineOptions& options = {});

// Local-symmetry side ------------------------------------------------------------

/// -ln(1 - p); throws PreconditionError for p >= 1 or p < 0.
double log_weight(double p);
/// c[u] = -ln(1 - p_uw), 0 for u = w or non-neighbours. Throws PreconditionError if some p_uw = 1.
std::vector<double> log_weights(const WeightedGraph& g, std::size_t w);

/// The model with the vertical edge at w closed.
PercolationModel thm1_conditioned(const BunkbedGraph& b, std::size_t w);

struct DcThm1Cluster {
  double p_minus = 0;  // P_C(w- ~ C_i)
  double p_plus = 0;   // P_C(w+ ~ C_i)
  double r = 0;        // prod over j != i of (1 - p_j- p_j+)
  double term = 0;     // r_i (p_i- - p_i+)(-ln(1-p_i-) + ln(1-p_i+))
  double log_sum_minus = 0;  // sum of c_uw over u- in C_i
  double log_sum_plus = 0;
};

struct DcThm1 {
  double closed_form = 0;
  double via_patterns = 0;
  std::vector<DcThm1Cluster> clusters;
  /// P_C(C_i ↔ w- ≁ w+) == p_i-(1 - p_i+) r_i and the mirrored identity, exactly, for every cluster.
  bool factorization_exact = true;
};

/// Requires the vertical edge at w to have weight 0 in `model` and every
/// edge at w_± to have weight below 1.
DcThm1 d_C_thm1(const BunkbedGraph& b, const PercolationModel& model, std::size_t w,
                const ClusterPartition& partition, const EngineOptions& options = {});

/// Checks the local-symmetry argument on (g, v, w). Throws HypothesisFailure
/// unless thm1_hypothesis(g, v, w).
VerificationReport verify_thm1_decomposition(const WeightedGraph& g, std::size_t v, std::size_t w,
                                             const EngineOptions& options = {});

/// The weaker sufficient condition: P(u- ↔ w-) and P(u- ↔ w+) do not depend
/// on u over all u with p_uw > 0 and p_u != 1 (tested directly, without
/// automorphisms), and p_vw > 0.
VerificationReport weak_thm1_condition(const WeightedGraph& g, std::size_t v, std::size_t w,
                                       const EngineOptions& options = {});

}  // namespace bunkbed
