#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "bunkbed/graph.hpp"
#include "bunkbed/model.hpp"

namespace bunkbed {

/// SplitMix64 stream keyed by (seed, stream). Each chunk of samples uses its
/// own stream, so results do not depend on how chunks are spread over threads.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream) : state_(mix(seed ^ mix(stream + kGolden))) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix(state_);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

/// Edge is open iff a uniform 64-bit draw is below floor(p * 2^64);
/// p = 1 is always open. The bias is below 2^-64 per edge.
std::uint64_t open_threshold(const Probability& p);

inline constexpr std::uint64_t kSamplesPerChunk = 4096;

struct McOptions {
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 0;
};

struct McResult {
  double estimate = 0;
  double standard_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Number of sampled configurations in which each event holds.
std::vector<std::uint64_t> mc_event_counts(const PercolationModel& model,
                                           std::span<const ConnectivityEvent> events,
                                           const McOptions& options);

McResult mc_event_probability(const PercolationModel& model, const ConnectivityEvent& event,
                              const McOptions& options);

/// Paired estimate of P(v- ↔ w-) - P(v- ↔ w+) on common sampled configurations.
struct McGapResult {
  McResult lower_lower;
  McResult lower_upper;
  double gap = 0;
  double paired_standard_error = 0;
  double unpaired_standard_error = 0;

  /// gap < -sigmas * paired standard error.
  bool flagged(double sigmas = 4.0) const { return gap < -sigmas * paired_standard_error; }
};

McGapResult mc_bunkbed_gap(const BunkbedGraph& b, std::size_t v, std::size_t w, const McOptions& options);

/// Several base pairs from one sampling pass.
std::vector<McGapResult> mc_bunkbed_gaps(const BunkbedGraph& b,
                                         std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                         const McOptions& options);

}  // namespace bunkbed
