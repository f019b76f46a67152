#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "bunkbed/generators.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/rational.hpp"

namespace bunkbed {

enum class PairSelection { all, same_side, cross_side };
enum class EngineChoice { automatic, exact, mc };
/// constant: vertical weights equal p (P_p). subsets: every H ⊆ V with
/// vertical weight 1 on H and 0 elsewhere (P_{p,H}).
enum class VerticalMode { constant, subsets };

struct SearchConfig {
  enum class Mode { class_sweep, random, exhaustive };
  Mode mode = Mode::class_sweep;
  std::vector<ClassSpec> classes;
  std::vector<Probability> p_grid{Probability(1, 4), Probability(1, 2), Probability(3, 4)};
  PairSelection pairs = PairSelection::all;
  VerticalMode vertical = VerticalMode::constant;
  std::size_t max_vertices = 4;
  std::vector<Probability> edge_palette{Probability(0, 1), Probability(1, 4), Probability(1, 2), Probability(3, 4)};
  std::vector<Probability> vertex_palette{Probability(0, 1), Probability(1, 2), Probability(1, 1)};
  std::size_t instances = 1000;
  std::uint64_t samples = 1000000;
  std::uint64_t seed = 1;
  EngineChoice engine = EngineChoice::automatic;
  std::size_t cap = 30;
  int workers = 0;
  double flag_sigmas = 4.0;
  /// Keep one record per (instance, pair, p) in the report.
  bool keep_records = true;
};

/// Throws InvalidInput with the offending field.
SearchConfig search_config_from_json(const nlohmann::json& doc);
nlohmann::ordered_json to_json(const SearchConfig& config);

struct GapRecord {
  std::string instance;
  std::string v, w;
  std::string p;
  std::string engine;    // "exact" or "mc"
  std::string gap;       // exact fraction, or decimal for MC
  double gap_value = 0;
  double standard_error = 0;  // MC only
  bool thm1 = false;     // local-symmetry hypothesis, in either orientation
  bool thm2 = false;     // same-neighbour hypothesis
  std::string pair_case;  // "cross-side", "same-side V1", ... or "" for non-partite classes
};

struct Violation {
  std::string instance, v, w, p;
  std::string gap;
  /// Independent exact recomputation.
  nlohmann::ordered_json transcript;
};

struct ClassSummary {
  std::string name;
  std::size_t instances = 0;
  std::size_t checks = 0;
  std::size_t thm1 = 0, thm2 = 0, uncovered = 0;
  std::size_t exact = 0, mc = 0;
  std::size_t mc_flags = 0;
  std::size_t skipped = 0;
  std::optional<double> min_gap;
};

struct MinimumGap {
  double value = 0;
  std::string exact;  // empty when only an MC estimate exists
  std::string instance, v, w, p;
};

struct SearchReport {
  std::string mode;
  std::size_t instances_checked = 0;
  std::size_t checks = 0;
  std::optional<MinimumGap> min_gap;
  std::vector<Violation> violations;
  std::size_t mc_flags = 0;
  std::size_t flags_cleared = 0;
  std::size_t flags_unresolved = 0;
  std::vector<ClassSummary> classes;
  std::vector<GapRecord> records;
  std::vector<std::string> skipped;
  /// (theorem, case) pairs exercised, e.g. "thm2:complete_bipartite/same-side V1".
  std::set<std::string> coverage;
  /// Exhaustive mode: number of non-isomorphic graphs per vertex count.
  std::map<std::size_t, std::size_t> graphs_by_size;

  bool clean() const { return violations.empty() && flags_unresolved == 0; }
  nlohmann::ordered_json to_json() const;
  /// Per-class summary table.
  std::string to_csv() const;
};

SearchReport verify_class(const std::vector<ClassSpec>& specs, const SearchConfig& config);
SearchReport search_random(const SearchConfig& config);
SearchReport search_exhaustive(const SearchConfig& config);
SearchReport run_search(const SearchConfig& config);

/// All simple graphs on n vertices up to isomorphism, as adjacency bitmasks
/// over pairs (i < j) in lexicographic order; each is the minimum over all
/// vertex relabelings. Requires n <= 7.
std::vector<std::uint32_t> nonisomorphic_graphs(std::size_t n);
/// Minimum adjacency bitmask over all relabelings.
std::uint32_t canonical_mask(std::size_t n, std::uint32_t mask);
WeightedGraph graph_from_mask(std::size_t n, std::uint32_t mask, const Probability& p);

std::string to_string(PairSelection s);
std::string to_string(EngineChoice e);

}  // namespace bunkbed
