#pragma once

// Exhaustive configuration enumeration kernels.
//
// A configuration assigns open/closed to every free edge. The kernel walks
// the binary decision tree edge by edge with a rollback union-find. When an
// edge joins two vertices that are already connected, both of its states
// lead to the same final clusters, so the walk takes a single "absorbed"
// branch whose weight is p + (1 - p) = 1. Leaves therefore correspond to the
// spanning forests of the free-edge graph rather than to all 2^m subsets,
// while the summed weights are identical.
//
// Weights are tracked by a Tracker policy:
//   CountTracker     histogram index over (open, closed) counts per weight
//                    class; exact and symbolic in the class values.
//   NumeratorTracker exact integer numerator over a common denominator, for
//                    models with too many distinct weights to histogram.
//
// The parallel driver splits the tree at a fixed depth into independent
// tasks; accumulators are integers, so the merged result does not depend on
// the number of workers or the scheduling order.

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bunkbed/model.hpp"
#include "bunkbed/rational.hpp"
#include "bunkbed/union_find.hpp"

namespace bunkbed::enumeration {

inline constexpr std::uint32_t kForcedOpen = std::numeric_limits<std::uint32_t>::max() - 1;
inline constexpr std::uint32_t kForcedClosed = std::numeric_limits<std::uint32_t>::max();

struct FreeEdge {
  std::uint32_t a;
  std::uint32_t b;
  std::uint32_t weight_class;
};

struct Problem {
  std::size_t vertex_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> forced_open;
  std::vector<FreeEdge> free_edges;
  std::vector<std::size_t> class_sizes;

  RollbackUnionFind initial_components() const {
    RollbackUnionFind uf(vertex_count);
    for (auto [a, b] : forced_open) uf.unite(a, b);
    uf.commit();
    return uf;
  }
};

/// edge_class[e] is a class index below class_count, kForcedOpen or kForcedClosed.
inline Problem make_problem(std::size_t vertex_count,
                            std::span<const PercolationModel::Edge> edges,
                            std::span<const std::uint32_t> edge_class, std::size_t class_count) {
  Problem pb;
  pb.vertex_count = vertex_count;
  pb.class_sizes.assign(class_count, 0);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto c = edge_class[e];
    if (c == kForcedClosed) continue;
    if (c == kForcedOpen) {
      pb.forced_open.emplace_back(edges[e].a, edges[e].b);
      continue;
    }
    pb.free_edges.push_back({edges[e].a, edges[e].b, c});
    ++pb.class_sizes[c];
  }
  return pb;
}

class CountTracker {
 public:
  using State = std::uint64_t;
  using Accumulator = std::vector<std::uint64_t>;

  /// Histogram size, or nullopt if it would exceed `limit` entries.
  static std::optional<std::uint64_t> layout_size(const Problem& pb, std::uint64_t limit) {
    std::uint64_t size = 1;
    const std::size_t max_open = pb.vertex_count == 0 ? 0 : pb.vertex_count - 1;
    for (auto m : pb.class_sizes) {
      const std::uint64_t radix = (std::min(m, max_open) + 1) * (m + 1);
      if (size > limit / radix) return std::nullopt;
      size *= radix;
    }
    return size;
  }

  explicit CountTracker(const Problem& pb) {
    const std::size_t max_open = pb.vertex_count == 0 ? 0 : pb.vertex_count - 1;
    std::uint64_t stride = 1;
    for (auto m : pb.class_sizes) {
      open_radix_.push_back(std::min(m, max_open) + 1);
      closed_radix_.push_back(m + 1);
      open_stride_.push_back(stride);
      stride *= open_radix_.back();
      closed_stride_.push_back(stride);
      stride *= closed_radix_.back();
    }
    size_ = stride;
    for (const auto& e : pb.free_edges) {
      open_step_.push_back(open_stride_[e.weight_class]);
      closed_step_.push_back(closed_stride_[e.weight_class]);
    }
  }

  State initial() const { return 0; }
  State opened(State s, std::size_t depth) const { return s + open_step_[depth]; }
  State closed(State s, std::size_t depth) const { return s + closed_step_[depth]; }
  State absorbed(State s, std::size_t) const { return s; }

  Accumulator make_accumulator() const { return Accumulator(size_, 0); }
  void add(Accumulator& acc, State s) const { ++acc[s]; }
  static void merge(Accumulator& into, const Accumulator& from) {
    for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
  }

  std::uint64_t size() const { return size_; }
  std::size_t class_count() const { return open_radix_.size(); }

  /// Splits a histogram index into per-class open and closed counts.
  void decode(std::uint64_t index, std::vector<std::size_t>& open, std::vector<std::size_t>& closed) const {
    open.resize(class_count());
    closed.resize(class_count());
    for (std::size_t c = 0; c < class_count(); ++c) {
      open[c] = (index / open_stride_[c]) % open_radix_[c];
      closed[c] = (index / closed_stride_[c]) % closed_radix_[c];
    }
  }

 private:
  std::vector<std::uint64_t> open_radix_, closed_radix_, open_stride_, closed_stride_;
  std::vector<std::uint64_t> open_step_, closed_step_;
  std::uint64_t size_ = 1;
};

class NumeratorTracker {
 public:
  using State = std::uint32_t;
  using Accumulator = BigInt;

  NumeratorTracker(const Problem& pb, std::span<const Rational> class_values)
      : levels_(pb.free_edges.size() + 1) {
    denominator_ = 1;
    for (const auto& e : pb.free_edges) {
      const Rational& p = class_values[e.weight_class];
      BigInt den = p.get_den();
      open_.push_back(p.get_num());
      closed_.push_back(den - p.get_num());
      absorbed_.push_back(den);
      denominator_ *= den;
    }
  }

  State initial() {
    levels_[0] = 1;
    return 0;
  }
  State opened(State s, std::size_t depth) { return step(s, open_[depth]); }
  State closed(State s, std::size_t depth) { return step(s, closed_[depth]); }
  State absorbed(State s, std::size_t depth) { return step(s, absorbed_[depth]); }

  Accumulator make_accumulator() const { return 0; }
  void add(Accumulator& acc, State s) const { acc += levels_[s]; }
  static void merge(Accumulator& into, const Accumulator& from) { into += from; }

  /// Product of the denominators of all free-edge probabilities.
  const BigInt& denominator() const { return denominator_; }

 private:
  State step(State s, const BigInt& factor) {
    levels_[s + 1] = levels_[s] * factor;
    return s + 1;
  }

  std::vector<BigInt> open_, closed_, absorbed_;
  std::vector<BigInt> levels_;
  BigInt denominator_;
};

/// Connectivity events compiled against a small set of involved vertices.
class CompiledEvents {
 public:
  explicit CompiledEvents(std::span<const ConnectivityEvent> events) {
    auto slot = [&](std::uint32_t v) {
      auto it = std::find(involved_.begin(), involved_.end(), v);
      if (it != involved_.end()) return static_cast<std::uint32_t>(it - involved_.begin());
      involved_.push_back(v);
      return static_cast<std::uint32_t>(involved_.size() - 1);
    };
    for (const auto& ev : events) {
      offsets_.push_back(checks_.size());
      for (auto [a, b] : ev.must_connect) checks_.push_back({slot(a), slot(b), true});
      for (auto [a, b] : ev.must_separate) checks_.push_back({slot(a), slot(b), false});
    }
    offsets_.push_back(checks_.size());
  }

  std::size_t size() const { return offsets_.size() - 1; }
  std::span<const std::uint32_t> involved() const { return involved_; }

  bool holds(std::size_t event, const std::uint32_t* roots) const {
    for (std::size_t k = offsets_[event]; k < offsets_[event + 1]; ++k) {
      const auto& c = checks_[k];
      if ((roots[c.x] == roots[c.y]) != c.connect) return false;
    }
    return true;
  }

 private:
  struct Check {
    std::uint32_t x;
    std::uint32_t y;
    bool connect;
  };
  std::vector<std::uint32_t> involved_;
  std::vector<Check> checks_;
  std::vector<std::size_t> offsets_;
};

/// Accumulates, per event, the weight of the configurations where it holds.
template <class Tracker>
class EventVisitor {
 public:
  using Accumulator = typename Tracker::Accumulator;

  EventVisitor(const CompiledEvents& events, const Tracker& tracker)
      : events_(&events), roots_(events.involved().size()),
        acc_(events.size(), tracker.make_accumulator()) {}

  void leaf(const RollbackUnionFind& uf, Tracker& tracker, typename Tracker::State s) {
    const auto involved = events_->involved();
    for (std::size_t k = 0; k < involved.size(); ++k) roots_[k] = uf.find(involved[k]);
    for (std::size_t e = 0; e < acc_.size(); ++e)
      if (events_->holds(e, roots_.data())) tracker.add(acc_[e], s);
  }

  EventVisitor fork(const Tracker& tracker) const { return EventVisitor(*events_, tracker); }
  void merge(const EventVisitor& other) {
    for (std::size_t e = 0; e < acc_.size(); ++e) Tracker::merge(acc_[e], other.acc_[e]);
  }

  const std::vector<Accumulator>& accumulators() const { return acc_; }

 private:
  const CompiledEvents* events_;
  std::vector<std::uint32_t> roots_;
  std::vector<Accumulator> acc_;
};

/// Groups configurations by the partition they induce on `members`.
/// Keys label each member with its cluster number, clusters numbered by
/// first appearance.
template <class Tracker>
class PartitionVisitor {
 public:
  using Accumulator = typename Tracker::Accumulator;
  using Key = std::vector<std::uint8_t>;

  explicit PartitionVisitor(std::vector<std::uint32_t> members)
      : members_(std::move(members)), key_(members_.size()), roots_(members_.size()) {}

  void leaf(const RollbackUnionFind& uf, Tracker& tracker, typename Tracker::State s) {
    for (std::size_t k = 0; k < members_.size(); ++k) roots_[k] = uf.find(members_[k]);
    relabel();
    auto [it, fresh] = partitions_.try_emplace(key_, tracker.make_accumulator());
    tracker.add(it->second, s);
  }

  PartitionVisitor fork(const Tracker&) const { return PartitionVisitor(members_); }
  void merge(const PartitionVisitor& other) {
    for (const auto& [k, acc] : other.partitions_) {
      auto [it, fresh] = partitions_.try_emplace(k, acc);
      if (!fresh) Tracker::merge(it->second, acc);
    }
  }

  const std::map<Key, Accumulator>& partitions() const { return partitions_; }
  const std::vector<std::uint32_t>& members() const { return members_; }

 private:
  void relabel() {
    std::uint8_t next = 0;
    for (std::size_t k = 0; k < members_.size(); ++k) {
      std::size_t j = 0;
      while (j < k && roots_[j] != roots_[k]) ++j;
      key_[k] = j < k ? key_[j] : next++;
    }
  }

  std::vector<std::uint32_t> members_;
  Key key_;
  std::vector<std::uint32_t> roots_;
  std::map<Key, Accumulator> partitions_;
};

namespace detail {

template <class Tracker, class Visitor>
std::uint64_t walk(const Problem& pb, Tracker& tracker, Visitor& visitor, RollbackUnionFind& uf,
                   std::size_t depth, typename Tracker::State s) {
  if (depth == pb.free_edges.size()) {
    visitor.leaf(uf, tracker, s);
    return 1;
  }
  const FreeEdge& e = pb.free_edges[depth];
  const auto ra = uf.find(e.a);
  const auto rb = uf.find(e.b);
  if (ra == rb) return walk(pb, tracker, visitor, uf, depth + 1, tracker.absorbed(s, depth));
  std::uint64_t leaves = walk(pb, tracker, visitor, uf, depth + 1, tracker.closed(s, depth));
  uf.unite_roots(ra, rb);
  leaves += walk(pb, tracker, visitor, uf, depth + 1, tracker.opened(s, depth));
  uf.undo();
  return leaves;
}

enum class Decision : std::uint8_t { closed, open, absorbed };

inline void collect_frontier(const Problem& pb, std::size_t split, RollbackUnionFind& uf,
                             std::vector<Decision>& path, std::vector<std::vector<Decision>>& out) {
  const std::size_t depth = path.size();
  if (depth == split) {
    out.push_back(path);
    return;
  }
  const FreeEdge& e = pb.free_edges[depth];
  const auto ra = uf.find(e.a);
  const auto rb = uf.find(e.b);
  if (ra == rb) {
    path.push_back(Decision::absorbed);
    collect_frontier(pb, split, uf, path, out);
    path.pop_back();
    return;
  }
  path.push_back(Decision::closed);
  collect_frontier(pb, split, uf, path, out);
  path.back() = Decision::open;
  uf.unite_roots(ra, rb);
  collect_frontier(pb, split, uf, path, out);
  uf.undo();
  path.pop_back();
}

}  // namespace detail

inline int resolve_workers(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

/// Runs the enumeration on `workers` OpenMP threads (0 = runtime default)
/// and merges into `result`. Returns the number of leaves visited.
template <class Tracker, class Visitor>
std::uint64_t enumerate(const Problem& pb, const Tracker& tracker, Visitor& result, int workers = 0,
                        std::size_t split_depth = 10) {
  const std::size_t split = std::min(split_depth, pb.free_edges.size());
  const RollbackUnionFind base = pb.initial_components();

  std::vector<std::vector<detail::Decision>> tasks;
  {
    RollbackUnionFind uf = base;
    std::vector<detail::Decision> path;
    detail::collect_frontier(pb, split, uf, path, tasks);
  }

  std::uint64_t leaves = 0;
  const long task_count = static_cast<long>(tasks.size());
#pragma omp parallel num_threads(resolve_workers(workers)) reduction(+ : leaves)
  {
    Tracker local_tracker = tracker;
    Visitor local = result.fork(local_tracker);
#pragma omp for schedule(dynamic, 1)
    for (long t = 0; t < task_count; ++t) {
      RollbackUnionFind uf = base;
      auto s = local_tracker.initial();
      for (std::size_t d = 0; d < split; ++d) {
        switch (tasks[t][d]) {
          case detail::Decision::closed: s = local_tracker.closed(s, d); break;
          case detail::Decision::absorbed: s = local_tracker.absorbed(s, d); break;
          case detail::Decision::open:
            uf.unite(pb.free_edges[d].a, pb.free_edges[d].b);
            s = local_tracker.opened(s, d);
            break;
        }
      }
      leaves += detail::walk(pb, local_tracker, local, uf, split, s);
    }
#pragma omp critical(bunkbed_enumeration_merge)
    result.merge(local);
  }
  return leaves;
}

}  // namespace bunkbed::enumeration
