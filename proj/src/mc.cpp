#include "bunkbed/mc.hpp"

#include <omp.h>

#include <cmath>

#include "bunkbed/enumeration.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/union_find.hpp"

namespace bunkbed {

std::uint64_t open_threshold(const Probability& p) {
  if (p.is_one()) return ~std::uint64_t{0};
  BigInt scaled = p.value().get_num();
  scaled <<= 64;
  scaled /= p.value().get_den();
  return static_cast<std::uint64_t>(scaled.get_ui());
}

namespace {

McResult binomial_result(std::uint64_t hits, const McOptions& options) {
  McResult r;
  r.samples = options.samples;
  r.seed = options.seed;
  r.estimate = static_cast<double>(hits) / static_cast<double>(options.samples);
  r.standard_error = std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(options.samples));
  return r;
}

}  // namespace

std::vector<std::uint64_t> mc_event_counts(const PercolationModel& model,
                                           std::span<const ConnectivityEvent> events,
                                           const McOptions& options) {
  if (options.samples < 1) throw InvalidInput("samples must be >= 1");
  for (const auto& ev : events) ev.validate(model.vertex_count());

  struct SampledEdge {
    std::uint32_t a, b;
    std::uint64_t threshold;
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> always_open;
  std::vector<SampledEdge> sampled;
  for (const auto& e : model.edges) {
    if (e.p.is_zero()) continue;
    if (e.p.is_one()) always_open.emplace_back(e.a, e.b);
    else sampled.push_back({e.a, e.b, open_threshold(e.p)});
  }

  const enumeration::CompiledEvents compiled(events);
  const auto involved = compiled.involved();
  const std::uint64_t chunks = (options.samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
  const std::size_t event_count = compiled.size();
  std::vector<std::uint64_t> totals(event_count, 0);

#pragma omp parallel num_threads(enumeration::resolve_workers(options.workers))
  {
    std::vector<std::uint64_t> local(event_count, 0);
    std::vector<std::uint32_t> roots(involved.size());
    UnionFind uf;
#pragma omp for schedule(static)
    for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
      StreamRng rng(options.seed, static_cast<std::uint64_t>(c));
      const std::uint64_t begin = static_cast<std::uint64_t>(c) * kSamplesPerChunk;
      const std::uint64_t end = std::min(options.samples, begin + kSamplesPerChunk);
      for (std::uint64_t s = begin; s < end; ++s) {
        uf.reset(model.vertex_count());
        for (auto [a, b] : always_open) uf.unite(a, b);
        for (const auto& e : sampled)
          if (rng.next() < e.threshold) uf.unite(e.a, e.b);
        for (std::size_t k = 0; k < involved.size(); ++k) roots[k] = uf.find(involved[k]);
        for (std::size_t e = 0; e < event_count; ++e)
          if (compiled.holds(e, roots.data())) ++local[e];
      }
    }
#pragma omp critical(bunkbed_mc_merge)
    for (std::size_t e = 0; e < event_count; ++e) totals[e] += local[e];
  }
  return totals;
}

McResult mc_event_probability(const PercolationModel& model, const ConnectivityEvent& event,
                              const McOptions& options) {
  const auto counts = mc_event_counts(model, std::span(&event, 1), options);
  return binomial_result(counts.front(), options);
}

std::vector<McGapResult> mc_bunkbed_gaps(const BunkbedGraph& b,
                                         std::span<const std::pair<std::size_t, std::size_t>> pairs,
                                         const McOptions& options) {
  std::vector<ConnectivityEvent> events;
  for (auto [v, w] : pairs) {
    if (v >= b.base_size() || w >= b.base_size()) throw InvalidInput("vertex out of range");
    const auto vm = static_cast<std::uint32_t>(b.lower(v));
    const auto wm = static_cast<std::uint32_t>(b.lower(w));
    const auto wp = static_cast<std::uint32_t>(b.upper(w));
    events.push_back(ConnectivityEvent::connect(vm, wm));
    events.push_back(ConnectivityEvent::connect(vm, wp));
    events.push_back({{{vm, wm}}, {{vm, wp}}});
    events.push_back({{{vm, wp}}, {{vm, wm}}});
  }
  const auto counts = mc_event_counts(percolation_model(b), events, options);
  const double n = static_cast<double>(options.samples);

  std::vector<McGapResult> out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    McGapResult r;
    r.lower_lower = binomial_result(counts[4 * i], options);
    r.lower_upper = binomial_result(counts[4 * i + 1], options);
    const double only_same = static_cast<double>(counts[4 * i + 2]);
    const double only_cross = static_cast<double>(counts[4 * i + 3]);
    r.gap = (only_same - only_cross) / n;
    const double second_moment = (only_same + only_cross) / n;
    r.paired_standard_error = std::sqrt(std::max(0.0, second_moment - r.gap * r.gap) / n);
    r.unpaired_standard_error = std::hypot(r.lower_lower.standard_error, r.lower_upper.standard_error);
    out.push_back(r);
  }
  return out;
}

McGapResult mc_bunkbed_gap(const BunkbedGraph& b, std::size_t v, std::size_t w, const McOptions& options) {
  const std::pair<std::size_t, std::size_t> pair{v, w};
  return mc_bunkbed_gaps(b, std::span(&pair, 1), options).front();
}

}  // namespace bunkbed
