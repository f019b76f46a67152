#include "bunkbed/exact.hpp"

#include <cmath>
#include <map>
#include <string>

#include "bunkbed/enumeration.hpp"
#include "bunkbed/errors.hpp"

namespace bunkbed {

namespace {

using Clock = std::chrono::steady_clock;
using enumeration::CountTracker;
using enumeration::NumeratorTracker;

// Histogram cells allowed across all events before switching to numerators.
constexpr std::uint64_t kHistogramBudget = std::uint64_t{1} << 22;

struct Classified {
  std::vector<std::uint32_t> edge_class;
  std::vector<Rational> class_values;
};

Classified classify_by_value(const PercolationModel& model) {
  Classified out;
  std::map<Rational, std::uint32_t> index;
  for (const auto& e : model.edges) {
    if (e.p.is_zero()) {
      out.edge_class.push_back(enumeration::kForcedClosed);
    } else if (e.p.is_one()) {
      out.edge_class.push_back(enumeration::kForcedOpen);
    } else {
      auto [it, fresh] = index.try_emplace(e.p.value(), static_cast<std::uint32_t>(out.class_values.size()));
      if (fresh) out.class_values.push_back(e.p.value());
      out.edge_class.push_back(it->second);
    }
  }
  return out;
}

void check_cap(const enumeration::Problem& pb, std::size_t cap) {
  const auto m = pb.free_edges.size();
  if (m > cap)
    throw CapExceeded(std::to_string(m) + " free edges exceed the exact-enumeration cap of " +
                          std::to_string(cap) + " (2^" + std::to_string(m) +
                          " configurations); use the Monte Carlo engine or raise --cap",
                      m, cap);
}

void validate_events(const PercolationModel& model, std::span<const ConnectivityEvent> events) {
  for (const auto& ev : events) ev.validate(model.vertex_count());
}

// Weight of every histogram cell for concrete class values.
class CellWeights {
 public:
  CellWeights(const CountTracker& tracker, std::span<const Rational> values, std::size_t max_power)
      : tracker_(tracker) {
    for (const auto& p : values) {
      std::vector<Rational> up{1}, down{1};
      const Rational q = 1 - p;
      for (std::size_t k = 0; k < max_power; ++k) {
        up.push_back(up.back() * p);
        down.push_back(down.back() * q);
      }
      pow_p_.push_back(std::move(up));
      pow_q_.push_back(std::move(down));
    }
  }

  Rational operator()(std::uint64_t cell) {
    tracker_.decode(cell, open_, closed_);
    Rational w = 1;
    for (std::size_t c = 0; c < open_.size(); ++c) w *= pow_p_[c][open_[c]] * pow_q_[c][closed_[c]];
    return w;
  }

 private:
  const CountTracker& tracker_;
  std::vector<std::vector<Rational>> pow_p_, pow_q_;
  std::vector<std::size_t> open_, closed_;
};

}  // namespace

std::size_t free_edge_count(const PercolationModel& model) {
  std::size_t m = 0;
  for (const auto& e : model.edges)
    if (!e.p.is_zero() && !e.p.is_one()) ++m;
  return m;
}

double expected_configurations(const PercolationModel& model) {
  return std::ldexp(1.0, static_cast<int>(free_edge_count(model)));
}

ExactBatch event_probabilities(const PercolationModel& model, std::span<const ConnectivityEvent> events,
                               const EngineOptions& options) {
  const auto start = Clock::now();
  validate_events(model, events);
  const Classified cls = classify_by_value(model);
  const auto pb = enumeration::make_problem(model.vertex_count(), model.edges, cls.edge_class,
                                            cls.class_values.size());
  check_cap(pb, options.cap);

  const enumeration::CompiledEvents compiled(events);
  ExactBatch out;
  const std::uint64_t budget = kHistogramBudget / std::max<std::size_t>(1, events.size());
  if (CountTracker::layout_size(pb, budget)) {
    const CountTracker tracker(pb);
    enumeration::EventVisitor<CountTracker> visitor(compiled, tracker);
    out.configurations_evaluated = enumeration::enumerate(pb, tracker, visitor, options.workers);
    CellWeights weight(tracker, cls.class_values, pb.free_edges.size());
    std::map<std::uint64_t, Rational> cache;
    for (const auto& hist : visitor.accumulators()) {
      Rational total = 0;
      for (std::uint64_t cell = 0; cell < hist.size(); ++cell) {
        if (hist[cell] == 0) continue;
        auto it = cache.find(cell);
        if (it == cache.end()) it = cache.emplace(cell, weight(cell)).first;
        total += it->second * Rational(static_cast<unsigned long>(hist[cell]));
      }
      out.probabilities.push_back(std::move(total));
    }
  } else {
    const NumeratorTracker tracker(pb, cls.class_values);
    enumeration::EventVisitor<NumeratorTracker> visitor(compiled, tracker);
    out.configurations_evaluated = enumeration::enumerate(pb, tracker, visitor, options.workers);
    for (const auto& num : visitor.accumulators()) {
      Rational q(num, tracker.denominator());
      q.canonicalize();
      out.probabilities.push_back(std::move(q));
    }
  }
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return out;
}

ExactResult event_probability(const PercolationModel& model, const ConnectivityEvent& event,
                              const EngineOptions& options) {
  auto batch = event_probabilities(model, std::span(&event, 1), options);
  return {std::move(batch.probabilities.front()), batch.configurations_evaluated, batch.elapsed};
}

ExactResult event_probability(const PercolationModel& model, const ConnectivityEvent& event,
                              const std::vector<EdgeState>& states, const EngineOptions& options) {
  return event_probability(conditioned(model, states), event, options);
}

Rational connection_probability(const BunkbedGraph& b, std::size_t a, std::size_t c,
                                const EngineOptions& options) {
  const auto event = ConnectivityEvent::connect(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c));
  return event_probability(percolation_model(b), event, options).probability;
}

std::vector<ConnectivityEvent> pair_events(const BunkbedGraph& b, std::size_t v, std::size_t w) {
  const auto vp = static_cast<std::uint32_t>(b.upper(v)), vm = static_cast<std::uint32_t>(b.lower(v));
  const auto wp = static_cast<std::uint32_t>(b.upper(w)), wm = static_cast<std::uint32_t>(b.lower(w));
  return {
      ConnectivityEvent::connect(vm, wm),
      ConnectivityEvent::connect(vm, wp),
      ConnectivityEvent::connect(vp, wp),
      ConnectivityEvent::connect(vp, wm),
      exact_pattern(vm, vp, wp, wm),
      exact_pattern(vp, vm, wm, wp),
      exact_pattern(vm, vp, wm, wp),
      exact_pattern(vp, vm, wp, wm),
  };
}

PairQuantities pair_quantities(const BunkbedGraph& b, const PercolationModel& model, std::size_t v,
                               std::size_t w, const EngineOptions& options) {
  if (v >= b.base_size() || w >= b.base_size()) throw InvalidInput("vertex out of range");
  const auto events = pair_events(b, v, w);
  auto batch = event_probabilities(model, events, options);
  auto& p = batch.probabilities;
  PairQuantities q;
  q.lower_lower = p[0];
  q.lower_upper = p[1];
  q.upper_upper = p[2];
  q.upper_lower = p[3];
  for (int k = 0; k < 4; ++k) q.patterns[k] = p[4 + k];
  return q;
}

PairQuantities pair_quantities(const BunkbedGraph& b, std::size_t v, std::size_t w,
                               const EngineOptions& options) {
  return pair_quantities(b, percolation_model(b), v, w, options);
}

Rational bunkbed_gap(const BunkbedGraph& b, std::size_t v, std::size_t w, const EngineOptions& options) {
  const auto vm = static_cast<std::uint32_t>(b.lower(v));
  const ConnectivityEvent events[] = {ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.lower(w))),
                                      ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.upper(w)))};
  auto batch = event_probabilities(percolation_model(b), events, options);
  return batch.probabilities[0] - batch.probabilities[1];
}

Rational four_point_d(const BunkbedGraph& b, std::size_t v, std::size_t w, const EngineOptions& options) {
  return pair_quantities(b, v, w, options).four_point_d();
}

Rational pattern_d(const BunkbedGraph& b, std::size_t v, std::size_t w, const EngineOptions& options) {
  return pair_quantities(b, v, w, options).pattern_d();
}

Rational EventTallies::evaluate(std::size_t event, std::span<const Rational> class_values) const {
  if (class_values.size() != class_count()) throw InvalidInput("class value count mismatch");
  Rational total = 0;
  const auto& counts = counts_.at(event);
  for (std::size_t cell = 0; cell < counts.size(); ++cell) {
    if (counts[cell] == 0) continue;
    Rational w = 1;
    for (std::size_t c = 0; c < class_values.size(); ++c) {
      Rational up, down;
      mpz_pow_ui(up.get_num_mpz_t(), class_values[c].get_num_mpz_t(), open_[cell][c]);
      mpz_pow_ui(up.get_den_mpz_t(), class_values[c].get_den_mpz_t(), open_[cell][c]);
      const Rational q = 1 - class_values[c];
      mpz_pow_ui(down.get_num_mpz_t(), q.get_num_mpz_t(), closed_[cell][c]);
      mpz_pow_ui(down.get_den_mpz_t(), q.get_den_mpz_t(), closed_[cell][c]);
      w *= up * down;
    }
    total += w * Rational(static_cast<unsigned long>(counts[cell]));
  }
  return total;
}

std::vector<EventTallies::Cell> EventTallies::cells(std::size_t event) const {
  std::vector<Cell> out;
  const auto& counts = counts_.at(event);
  for (std::size_t cell = 0; cell < counts.size(); ++cell)
    if (counts[cell] != 0) out.push_back({open_[cell], closed_[cell], counts[cell]});
  return out;
}

EventTallies tally_events(const PercolationModel& structure, std::span<const std::uint32_t> edge_class,
                          std::size_t class_count, std::span<const ConnectivityEvent> events,
                          const EngineOptions& options) {
  if (edge_class.size() != structure.edges.size()) throw InvalidInput("edge class vector size mismatch");
  validate_events(structure, events);
  const auto pb = enumeration::make_problem(structure.vertex_count(), structure.edges, edge_class, class_count);
  check_cap(pb, options.cap);
  const std::uint64_t budget = kHistogramBudget / std::max<std::size_t>(1, events.size());
  if (!CountTracker::layout_size(pb, budget))
    throw CapExceeded("too many symbolic weight classes for a tally", pb.free_edges.size(), options.cap);

  const CountTracker tracker(pb);
  const enumeration::CompiledEvents compiled(events);
  enumeration::EventVisitor<CountTracker> visitor(compiled, tracker);

  EventTallies out;
  out.leaves_ = enumeration::enumerate(pb, tracker, visitor, options.workers);

  // Keep only cells that are nonzero for some event.
  std::vector<std::uint64_t> used;
  for (std::uint64_t cell = 0; cell < tracker.size(); ++cell)
    for (const auto& hist : visitor.accumulators())
      if (hist[cell] != 0) {
        used.push_back(cell);
        break;
      }
  for (auto cell : used) {
    std::vector<std::size_t> open, closed;
    tracker.decode(cell, open, closed);
    out.open_.push_back(std::move(open));
    out.closed_.push_back(std::move(closed));
  }
  if (out.open_.empty() && class_count > 0) {
    // Keep class_count() meaningful for events that never hold.
    out.open_.emplace_back(class_count, 0);
    out.closed_.emplace_back(class_count, 0);
    used.push_back(0);
  }
  for (const auto& hist : visitor.accumulators()) {
    std::vector<std::uint64_t> counts;
    counts.reserve(used.size());
    for (auto cell : used) counts.push_back(hist[cell]);
    out.counts_.push_back(std::move(counts));
  }
  return out;
}

}  // namespace bunkbed
