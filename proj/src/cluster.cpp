#include "bunkbed/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "bunkbed/enumeration.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/symmetry.hpp"

namespace bunkbed {

namespace {

constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

std::vector<std::uint32_t> cluster_index(std::size_t vertex_count, const ClusterPartition& partition) {
  std::vector<std::uint32_t> of(vertex_count, kNone);
  for (std::size_t i = 0; i < partition.clusters.size(); ++i)
    for (auto x : partition.clusters[i]) {
      if (x >= vertex_count) throw InvalidInput("partition references an unknown vertex");
      of[x] = static_cast<std::uint32_t>(i);
    }
  return of;
}

// Vertices: the marked ones in order, then one node per cluster. Edges with
// both ends in clusters are dropped: on A_C they are either inside a cluster
// or closed.
PercolationModel contract(const PercolationModel& model, const ClusterPartition& partition,
                          std::span<const std::uint32_t> marked) {
  const auto of = cluster_index(model.vertex_count(), partition);
  std::vector<std::uint32_t> image(model.vertex_count(), kNone);
  PercolationModel out;
  for (std::size_t k = 0; k < marked.size(); ++k) {
    image[marked[k]] = static_cast<std::uint32_t>(k);
    out.labels.push_back(model.labels[marked[k]]);
  }
  for (std::size_t i = 0; i < partition.clusters.size(); ++i) out.labels.push_back("C" + std::to_string(i));
  for (std::size_t x = 0; x < model.vertex_count(); ++x)
    if (of[x] != kNone) image[x] = static_cast<std::uint32_t>(marked.size() + of[x]);
  for (const auto& e : model.edges) {
    if (of[e.a] != kNone && of[e.b] != kNone) continue;
    if (image[e.a] == kNone || image[e.b] == kNone) continue;
    out.edges.push_back({image[e.a], image[e.b], e.p});
  }
  return out;
}

}  // namespace

std::vector<ClusterPartition> enumerate_partitions(const PercolationModel& model,
                                                   std::span<const std::uint32_t> excluded,
                                                   const EngineOptions& options) {
  const std::size_t n = model.vertex_count();
  std::vector<char> is_excluded(n, 0);
  for (auto x : excluded) {
    if (x >= n) throw InvalidInput("excluded vertex out of range");
    is_excluded[x] = 1;
  }
  std::vector<std::uint32_t> members, local(n, kNone);
  for (std::uint32_t x = 0; x < n; ++x)
    if (!is_excluded[x]) {
      local[x] = static_cast<std::uint32_t>(members.size());
      members.push_back(x);
    }

  std::vector<PercolationModel::Edge> reduced;
  std::vector<std::uint32_t> edge_class;
  std::vector<Rational> class_values;
  for (const auto& e : model.edges) {
    if (is_excluded[e.a] || is_excluded[e.b]) continue;
    reduced.push_back({local[e.a], local[e.b], e.p});
    if (e.p.is_zero()) {
      edge_class.push_back(enumeration::kForcedClosed);
    } else if (e.p.is_one()) {
      edge_class.push_back(enumeration::kForcedOpen);
    } else {
      edge_class.push_back(static_cast<std::uint32_t>(class_values.size()));
      class_values.push_back(e.p.value());
    }
  }
  const auto pb = enumeration::make_problem(members.size(), reduced, edge_class, class_values.size());
  if (pb.free_edges.size() > options.cap)
    throw CapExceeded(std::to_string(pb.free_edges.size()) + " reduced edges exceed the partition cap of " +
                          std::to_string(options.cap),
                      pb.free_edges.size(), options.cap);

  const enumeration::NumeratorTracker tracker(pb, class_values);
  std::vector<std::uint32_t> all(members.size());
  for (std::uint32_t k = 0; k < all.size(); ++k) all[k] = k;
  enumeration::PartitionVisitor<enumeration::NumeratorTracker> visitor(all);
  enumeration::enumerate(pb, tracker, visitor, options.workers);

  std::vector<ClusterPartition> out;
  for (const auto& [key, numerator] : visitor.partitions()) {
    ClusterPartition c;
    for (std::size_t k = 0; k < key.size(); ++k) {
      if (key[k] >= c.clusters.size()) c.clusters.resize(key[k] + 1u);
      c.clusters[key[k]].push_back(members[k]);
    }
    c.probability = Rational(numerator, tracker.denominator());
    c.probability.canonicalize();
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ClusterPartition> enumerate_partitions(const BunkbedGraph& b, std::span<const std::uint32_t> excluded,
                                                   const EngineOptions& options) {
  return enumerate_partitions(percolation_model(b), excluded, options);
}

AttachProbs attach_probs(const PercolationModel& model, const ClusterPartition& partition,
                         std::span<const std::uint32_t> marked) {
  const auto of = cluster_index(model.vertex_count(), partition);
  std::vector<std::uint32_t> slot(model.vertex_count(), kNone);
  for (std::size_t k = 0; k < marked.size(); ++k) {
    if (marked[k] >= model.vertex_count()) throw InvalidInput("marked vertex out of range");
    if (of[marked[k]] != kNone) throw PreconditionError("marked vertex lies inside a cluster");
    slot[marked[k]] = static_cast<std::uint32_t>(k);
  }
  std::vector<std::vector<Rational>> closed(partition.clusters.size(), std::vector<Rational>(marked.size(), Rational(1)));
  for (const auto& e : model.edges) {
    for (auto [m, c] : {std::pair{e.a, e.b}, std::pair{e.b, e.a}})
      if (slot[m] != kNone && of[c] != kNone) closed[of[c]][slot[m]] *= e.p.complement();
  }
  AttachProbs out;
  out.marked.assign(marked.begin(), marked.end());
  for (auto& row : closed) {
    for (auto& x : row) x = 1 - x;
    out.p.push_back(std::move(row));
  }
  return out;
}

Rational attach_pattern_probability(std::span<const Rational> row, std::uint32_t subset) {
  Rational acc = 1;
  for (std::size_t k = 0; k < row.size(); ++k) acc *= (subset >> k & 1u) ? row[k] : 1 - row[k];
  return acc;
}

Rational attach_at_most_one(std::span<const Rational> row) {
  Rational total = attach_pattern_probability(row, 0);
  for (std::size_t k = 0; k < row.size(); ++k) total += attach_pattern_probability(row, 1u << k);
  return total;
}

// Twin-vertex side ---------------------------------------------------------------

MarkedW marked_w(const BunkbedGraph& b, std::size_t v, std::size_t w) {
  return {static_cast<std::uint32_t>(b.lower(v)), static_cast<std::uint32_t>(b.upper(v)),
          static_cast<std::uint32_t>(b.lower(w)), static_cast<std::uint32_t>(b.upper(w))};
}

bool symmetric_row(std::span<const Rational> row) {
  return row.size() == 4 && row[kVPlus] == row[kWPlus] && row[kVMinus] == row[kWMinus];
}

namespace {

constexpr std::uint32_t bit(WIndex k) { return 1u << k; }
constexpr std::uint32_t kPlusPair = bit(kVPlus) | bit(kWPlus);
constexpr std::uint32_t kMinusPair = bit(kVMinus) | bit(kWMinus);
constexpr std::uint32_t kPlusMinus = bit(kVPlus) | bit(kWMinus);
constexpr std::uint32_t kMinusPlus = bit(kVMinus) | bit(kWPlus);

void require_symmetric(std::span<const std::vector<Rational>> rows) {
  for (const auto& r : rows)
    if (!symmetric_row(r))
      throw SymmetryViolation("attach probabilities differ between v and w; the same-neighbour hypothesis fails");
}

}  // namespace

DklForms d_KL_forms(std::span<const std::vector<Rational>> k_rows, std::span<const std::vector<Rational>> l_rows) {
  require_symmetric(k_rows);
  require_symmetric(l_rows);
  auto prod_pattern = [](std::span<const std::vector<Rational>> rows, std::uint32_t subset) {
    Rational acc = 1;
    for (const auto& r : rows) acc *= attach_pattern_probability(r, subset);
    return acc;
  };
  DklForms out;
  out.four_product = prod_pattern(k_rows, kPlusPair) * prod_pattern(l_rows, kMinusPair) +
                     prod_pattern(k_rows, kMinusPair) * prod_pattern(l_rows, kPlusPair) -
                     prod_pattern(k_rows, kPlusMinus) * prod_pattern(l_rows, kMinusPlus) -
                     prod_pattern(k_rows, kMinusPlus) * prod_pattern(l_rows, kPlusMinus);
  Rational first = 1, second = 1;
  for (const auto& r : k_rows) {
    first *= r[kVPlus] * (1 - r[kVMinus]);
    second *= r[kVMinus] * (1 - r[kVPlus]);
  }
  for (const auto& r : l_rows) {
    first *= r[kVMinus] * (1 - r[kVPlus]);
    second *= r[kVPlus] * (1 - r[kVMinus]);
  }
  const Rational diff = first - second;
  out.squared = diff * diff;
  return out;
}

Rational d_KL(std::span<const std::vector<Rational>> k_rows, std::span<const std::vector<Rational>> l_rows) {
  auto forms = d_KL_forms(k_rows, l_rows);
  if (forms.four_product != forms.squared) throw std::logic_error("d_KL forms disagree");
  return forms.four_product;
}

PercolationModel thm2_conditioned(const BunkbedGraph& b, std::size_t v, std::size_t w) {
  std::vector<std::pair<std::size_t, EdgeState>> forced{{b.vertical_edge(v), EdgeState::closed},
                                                        {b.vertical_edge(w), EdgeState::closed}};
  if (auto e = b.base().find_edge(v, w)) {
    auto [up, down] = b.horizontal_edges(*e);
    forced.emplace_back(up, EdgeState::closed);
    forced.emplace_back(down, EdgeState::closed);
  }
  return conditioned(percolation_model(b), forced);
}

namespace {

// Partial products of both d_{K,L} forms along one J/K/L assignment.
struct JklState {
  Rational p_j = 1;
  Rational k_pattern[4] = {1, 1, 1, 1};  // plus pair, minus pair, plus-minus, minus-plus
  Rational l_pattern[4] = {1, 1, 1, 1};
  Rational first = 1, second = 1;
  bool k_used = false;
};

struct JklCluster {
  Rational at_most_one;
  Rational pattern[4];
  Rational plus_side, minus_side;  // p+(1 - p-), p-(1 - p+)
};

void jkl_sum(const std::vector<JklCluster>& cs, std::size_t i, const JklState& s, Rational& via_sum,
             Rational& via_squares) {
  if (i == cs.size()) {
    if (!s.k_used) return;
    via_sum += s.p_j * (s.k_pattern[0] * s.l_pattern[1] + s.k_pattern[1] * s.l_pattern[0] -
                        s.k_pattern[2] * s.l_pattern[3] - s.k_pattern[3] * s.l_pattern[2]);
    const Rational diff = s.first - s.second;
    via_squares += s.p_j * diff * diff;
    return;
  }
  const auto& c = cs[i];
  JklState next = s;
  next.p_j *= c.at_most_one;
  jkl_sum(cs, i + 1, next, via_sum, via_squares);

  next = s;
  next.k_used = true;
  for (int k = 0; k < 4; ++k) next.k_pattern[k] *= c.pattern[k];
  next.first *= c.plus_side;
  next.second *= c.minus_side;
  jkl_sum(cs, i + 1, next, via_sum, via_squares);

  next = s;
  for (int k = 0; k < 4; ++k) next.l_pattern[k] *= c.pattern[k];
  next.first *= c.minus_side;
  next.second *= c.plus_side;
  jkl_sum(cs, i + 1, next, via_sum, via_squares);
}

}  // namespace

DcThm2 d_C_thm2(const PercolationModel& model, const MarkedW& w_vertices, const ClusterPartition& partition,
                const EngineOptions& options) {
  for (const auto& e : model.edges) {
    const bool a_in = std::find(w_vertices.begin(), w_vertices.end(), e.a) != w_vertices.end();
    const bool b_in = std::find(w_vertices.begin(), w_vertices.end(), e.b) != w_vertices.end();
    if (a_in && b_in && !e.p.is_zero())
      throw PreconditionError("d_C for the same-neighbour argument needs p_v = p_w = p_vw = 0");
  }
  DcThm2 out;
  out.attach = attach_probs(model, partition, w_vertices);
  require_symmetric(out.attach.p);

  // Clusters no marked vertex can reach always land in J with factor 1.
  std::vector<JklCluster> active;
  for (const auto& row : out.attach.p) {
    if (std::all_of(row.begin(), row.end(), [](const Rational& x) { return sgn(x) == 0; })) continue;
    JklCluster c;
    c.at_most_one = attach_at_most_one(row);
    c.pattern[0] = attach_pattern_probability(row, kPlusPair);
    c.pattern[1] = attach_pattern_probability(row, kMinusPair);
    c.pattern[2] = attach_pattern_probability(row, kPlusMinus);
    c.pattern[3] = attach_pattern_probability(row, kMinusPlus);
    c.plus_side = row[kVPlus] * (1 - row[kVMinus]);
    c.minus_side = row[kVMinus] * (1 - row[kVPlus]);
    active.push_back(std::move(c));
  }
  out.active_clusters = active.size();
  if (active.size() > kMaxActiveClusters)
    throw CapExceeded(std::to_string(active.size()) + " clusters attach to W; the J,K,L sum is capped at " +
                          std::to_string(kMaxActiveClusters),
                      active.size(), kMaxActiveClusters);
  out.via_sum = 0;
  out.via_squares = 0;
  jkl_sum(active, 0, JklState{}, out.via_sum, out.via_squares);

  const auto contracted = contract(model, partition, w_vertices);
  const ConnectivityEvent events[] = {
      exact_pattern(kVMinus, kVPlus, kWPlus, kWMinus),
      exact_pattern(kVPlus, kVMinus, kWMinus, kWPlus),
      exact_pattern(kVMinus, kVPlus, kWMinus, kWPlus),
      exact_pattern(kVPlus, kVMinus, kWPlus, kWMinus),
  };
  const auto p = event_probabilities(contracted, events, options).probabilities;
  out.direct = p[0] + p[1] - p[2] - p[3];
  return out;
}

namespace {

nlohmann::ordered_json cluster_labels(const PercolationModel& model, const ClusterPartition& c) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& cluster : c.clusters) {
    auto inner = nlohmann::ordered_json::array();
    for (auto x : cluster) inner.push_back(model.labels[x]);
    arr.push_back(std::move(inner));
  }
  return arr;
}

void describe_pair(VerificationReport& rep, const WeightedGraph& g, std::size_t v, std::size_t w) {
  rep.context()["v"] = g.id(v);
  rep.context()["w"] = g.id(w);
  rep.context()["base_vertices"] = g.vertex_count();
  rep.context()["base_edges"] = g.edge_count();
}

}  // namespace

VerificationReport verify_thm2_decomposition(const WeightedGraph& g, std::size_t v, std::size_t w,
                                             const EngineOptions& options) {
  if (v >= g.vertex_count() || w >= g.vertex_count()) throw InvalidInput("vertex out of range");
  if (!thm2_hypothesis(g, v, w))
    throw HypothesisFailure("p_vu != p_wu for some u: " + g.id(v) + " and " + g.id(w) +
                            " do not have the same neighbours");
  const BunkbedGraph b(g);
  const auto model = percolation_model(b);
  VerificationReport rep("verify-thm2");
  describe_pair(rep, g, v, w);

  const auto q = pair_quantities(b, model, v, w, options);
  rep.context()["P(v-<->w-)"] = to_string(q.lower_lower);
  rep.context()["P(v-<->w+)"] = to_string(q.lower_upper);
  rep.check_equal("cancellation: pattern_d == four_point_d", q.pattern_d(), q.four_point_d());

  // Conditioning on Z_v = Z_w = 0 is exact: every pattern needs v- ≁ v+ and w- ≁ w+.
  // Off A the negative patterns vanish and the positive ones are kept as
  // nonnegative extra terms; they are absent when p_vw = 0.
  const Rational pv = g.vertex_weight(v).value(), pw = g.vertex_weight(w).value();
  const Rational pvw = g.weight_between(v, w).value();
  const auto cond = thm2_conditioned(b, v, w);
  const auto qa = pair_quantities(b, cond, v, w, options);
  const Rational d_cond = qa.pattern_d();
  const Rational p_a = (1 - pvw) * (1 - pvw);
  Rational inner = p_a * d_cond;
  if (auto e = g.find_edge(v, w)) {
    const auto [up, down] = b.horizontal_edges(*e);
    const std::pair<EdgeState, EdgeState> off_a[] = {
        {EdgeState::open, EdgeState::closed}, {EdgeState::closed, EdgeState::open}, {EdgeState::open, EdgeState::open}};
    for (auto [su, sd] : off_a) {
      const Rational prob = (su == EdgeState::open ? pvw : 1 - pvw) * (sd == EdgeState::open ? pvw : 1 - pvw);
      if (sgn(prob) == 0) continue;
      const auto ms = conditioned(model, {{b.vertical_edge(v), EdgeState::closed},
                                          {b.vertical_edge(w), EdgeState::closed},
                                          {up, su},
                                          {down, sd}});
      const auto qs = pair_quantities(b, ms, v, w, options);
      const std::string tag = std::string(su == EdgeState::open ? "open" : "closed") + "/" +
                              (sd == EdgeState::open ? "open" : "closed");
      rep.check_equal("off A (vw " + tag + "): negative patterns vanish", qs.patterns[2] + qs.patterns[3], 0);
      rep.check_geq("off A (vw " + tag + "): remaining term >= 0", qs.pattern_d(), 0);
      inner += prob * qs.pattern_d();
    }
  }
  rep.context()["P(A)"] = to_string(p_a);
  rep.context()["pattern_d_conditioned"] = to_string(d_cond);
  rep.check_equal("conditioning: pattern_d == P(Zv=0) P(Zw=0) [P(A) d_A + off-A terms]", q.pattern_d(),
                  (1 - pv) * (1 - pw) * inner,
                  sgn(pvw) == 0 ? "p_vw = 0, so P(A) = 1 and there are no off-A terms" : "");
  if (sgn(pvw) == 0)
    rep.check_equal("conditioning: pattern_d_conditioned * P(Zv=0) P(Zw=0) P(A) == pattern_d",
                    d_cond * (1 - pv) * (1 - pw) * p_a, q.pattern_d());

  const auto w_vertices = marked_w(b, v, w);
  const auto partitions = enumerate_partitions(cond, w_vertices, {kPartitionCap, options.workers});
  Rational total_prob = 0, weighted = 0;
  std::optional<Rational> min_dc;
  std::size_t agreeing = 0;
  auto listing = nlohmann::ordered_json::array();
  for (const auto& c : partitions) {
    const auto dc = d_C_thm2(cond, w_vertices, c, options);
    if (dc.agree()) ++agreeing;
    total_prob += c.probability;
    weighted += c.probability * dc.direct;
    if (!min_dc || dc.direct < *min_dc) min_dc = dc.direct;
    listing.push_back({{"clusters", cluster_labels(cond, c)},
                       {"P(A_C)", to_string(c.probability)},
                       {"d_C", to_string(dc.direct)},
                       {"active_clusters", dc.active_clusters}});
  }
  rep.context()["partitions"] = std::move(listing);
  rep.check_equal("partitions: sum of P(A_C) == 1", total_prob, 1);
  rep.check_equal("d_C: J,K,L sum == squared form == direct enumeration (partitions agreeing)",
                  Rational(static_cast<unsigned long>(agreeing)),
                  Rational(static_cast<unsigned long>(partitions.size())));
  rep.check_equal("decomposition: pattern_d_conditioned == sum_C P(A_C) d_C", d_cond, weighted);
  rep.check_geq("every d_C >= 0 (minimum)", min_dc.value_or(Rational(0)), 0);
  rep.check_equal("reflection: four_point_d == 2 gap", q.four_point_d(), 2 * q.gap());
  rep.check_geq("bunkbed gap >= 0", q.gap(), 0);
  return rep;
}

// Local-symmetry side ------------------------------------------------------------

double log_weight(double p) {
  if (!(p >= 0) || !(p < 1)) throw PreconditionError("log weight needs 0 <= p < 1");
  return -std::log1p(-p);
}

std::vector<double> log_weights(const WeightedGraph& g, std::size_t w) {
  if (w >= g.vertex_count()) throw InvalidInput("vertex out of range");
  std::vector<double> c(g.vertex_count(), 0.0);
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (u == w) continue;
    const auto p = g.weight_between(u, w);
    if (p.is_one()) throw PreconditionError("edge " + g.id(u) + "-" + g.id(w) + " has weight 1");
    c[u] = log_weight(to_double(p.value()));
  }
  return c;
}

PercolationModel thm1_conditioned(const BunkbedGraph& b, std::size_t w) {
  return conditioned(percolation_model(b), {{b.vertical_edge(w), EdgeState::closed}});
}

DcThm1 d_C_thm1(const BunkbedGraph& b, const PercolationModel& model, std::size_t w,
                const ClusterPartition& partition, const EngineOptions& options) {
  const std::size_t n = b.base_size();
  if (w >= n) throw InvalidInput("vertex out of range");
  if (model.vertex_count() != 2 * n || model.edges.size() != b.doubled().edge_count())
    throw PreconditionError("model does not have the layout of the bunkbed graph");
  if (!model.edges[b.vertical_edge(w)].p.is_zero())
    throw PreconditionError("d_C for the neighbouring-vertex argument needs p_w = 0");
  const auto wp = static_cast<std::uint32_t>(b.upper(w)), wm = static_cast<std::uint32_t>(b.lower(w));
  for (const auto& e : model.edges)
    if ((e.a == wp || e.b == wp || e.a == wm || e.b == wm) && e.p.is_one())
      throw PreconditionError("edges at w must have weight below 1");

  const std::uint32_t marked[] = {wp, wm};
  const auto attach = attach_probs(model, partition, marked);
  const std::size_t k = partition.clusters.size();

  std::vector<Rational> blocked(k);  // 1 - p_i- p_i+
  for (std::size_t i = 0; i < k; ++i) blocked[i] = 1 - attach.p[i][0] * attach.p[i][1];
  std::vector<Rational> r(k, Rational(1));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) r[i] *= blocked[j];

  // Per-vertex log weights, read off the model's edges into w_-.
  std::vector<double> c(n, 0.0);
  for (const auto& e : model.edges) {
    if (e.a == wm || e.b == wm) {
      const auto other = e.a == wm ? e.b : e.a;
      if (other >= n && other != wm) c[other - n] = log_weight(to_double(e.p.value()));
    }
  }

  DcThm1 out;
  const auto of = cluster_index(model.vertex_count(), partition);
  for (std::size_t i = 0; i < k; ++i) {
    DcThm1Cluster t;
    t.p_plus = to_double(attach.p[i][0]);
    t.p_minus = to_double(attach.p[i][1]);
    t.r = to_double(r[i]);
    t.term = t.r * (t.p_minus - t.p_plus) * (log_weight(t.p_minus) - log_weight(t.p_plus));
    for (auto x : partition.clusters[i]) (x >= n ? t.log_sum_minus : t.log_sum_plus) += c[x % n];
    out.closed_form += t.term;
    out.clusters.push_back(t);
  }

  // Direct: P_C(C_i ↔ w- ≁ w+) and P_C(C_i ↔ w+ ≁ w-) on the contracted graph.
  const auto contracted = contract(model, partition, marked);
  std::vector<ConnectivityEvent> events;
  for (std::uint32_t i = 0; i < k; ++i) {
    const std::uint32_t node = 2 + i;
    events.push_back({{{node, 1}}, {{0, 1}}});
    events.push_back({{{node, 0}}, {{0, 1}}});
  }
  const auto p = event_probabilities(contracted, events, options).probabilities;
  for (std::size_t i = 0; i < k; ++i) {
    const Rational& to_minus = p[2 * i];
    const Rational& to_plus = p[2 * i + 1];
    if (to_minus != attach.p[i][1] * (1 - attach.p[i][0]) * r[i]) out.factorization_exact = false;
    if (to_plus != attach.p[i][0] * (1 - attach.p[i][1]) * r[i]) out.factorization_exact = false;
  }
  for (std::size_t u = 0; u < n; ++u) {
    if (u == w || c[u] == 0) continue;
    const auto im = of[n + u], ip = of[u];
    const Rational diff = p[2 * im] - p[2 * im + 1] + p[2 * ip + 1] - p[2 * ip];
    out.via_patterns += c[u] * to_double(diff);
  }
  return out;
}

namespace {

bool relative_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), std::numeric_limits<double>::min()});
}

}  // namespace

VerificationReport verify_thm1_decomposition(const WeightedGraph& g, std::size_t v, std::size_t w,
                                             const EngineOptions& options) {
  if (v >= g.vertex_count() || w >= g.vertex_count()) throw InvalidInput("vertex out of range");
  if (!thm1_hypothesis(g, v, w))
    throw HypothesisFailure("no local symmetry for " + g.id(v) + ", " + g.id(w) +
                            " (p_vw = 0 or a neighbour of w is not in the orbit of v)");
  const std::size_t n = g.vertex_count();
  const BunkbedGraph b(g);
  const auto model = percolation_model(b);
  VerificationReport rep("verify-thm1");
  describe_pair(rep, g, v, w);

  auto lo = [&](std::size_t u) { return static_cast<std::uint32_t>(b.lower(u)); };
  auto hi = [&](std::size_t u) { return static_cast<std::uint32_t>(b.upper(u)); };

  // Original model: P(u- ↔ w-) and P(u- ↔ w+) for every u.
  std::vector<ConnectivityEvent> events;
  for (std::size_t u = 0; u < n; ++u) {
    events.push_back(ConnectivityEvent::connect(lo(u), lo(w)));
    events.push_back(ConnectivityEvent::connect(lo(u), hi(w)));
  }
  const auto orig = event_probabilities(model, events, options).probabilities;
  const Rational gap = orig[2 * v] - orig[2 * v + 1];
  rep.context()["P(v-<->w-)"] = to_string(orig[2 * v]);
  rep.context()["P(v-<->w+)"] = to_string(orig[2 * v + 1]);

  const auto& pv = g.vertex_weight(v);
  const auto& pw = g.vertex_weight(w);
  if (pv.is_one() || pw.is_one()) {
    rep.check_equal("p_v = 1 or p_w = 1: gap == 0", gap, 0);
    rep.check_geq("bunkbed gap >= 0", gap, 0);
    return rep;
  }

  for (std::size_t u = 0; u < n; ++u) {
    if (u == w || g.weight_between(u, w).is_zero() || g.vertex_weight(u).is_one()) continue;
    rep.check_equal("orbit: P(" + g.id(u) + "- <-> w-) == P(v- <-> w-)", orig[2 * u], orig[2 * v]);
    rep.check_equal("orbit: P(" + g.id(u) + "- <-> w+) == P(v- <-> w+)", orig[2 * u + 1], orig[2 * v + 1]);
  }

  // Conditioned on Z_w = 0.
  const auto cond = thm1_conditioned(b, w);
  events.clear();
  for (std::size_t u = 0; u < n; ++u) {
    events.push_back(ConnectivityEvent::connect(lo(u), lo(w)));
    events.push_back(ConnectivityEvent::connect(lo(u), hi(w)));
    events.push_back(ConnectivityEvent::connect(hi(u), hi(w)));
    events.push_back(ConnectivityEvent::connect(hi(u), lo(w)));
  }
  const auto p0 = event_probabilities(cond, events, options).probabilities;
  const Rational gap0 = p0[4 * v] - p0[4 * v + 1];
  rep.check_equal("conditioning on Z_w = 0: gap == (1 - p_w) gap_conditioned", gap, (1 - pw.value()) * gap0);

  const auto c = log_weights(g, w);
  double d = 0, d_reflected = 0, c_total = 0;
  for (std::size_t u = 0; u < n; ++u) {
    if (u == w) continue;
    d += 2 * c[u] * to_double(p0[4 * u] - p0[4 * u + 1]);
    d_reflected += c[u] * to_double(p0[4 * u] - p0[4 * u + 1] + p0[4 * u + 2] - p0[4 * u + 3]);
    if (!g.weight_between(u, w).is_zero() && !g.vertex_weight(u).is_one()) c_total += c[u];
  }
  rep.context()["c"] = c_total;
  rep.context()["d"] = d;
  rep.check_geq("c >= c_vw > 0", c_total, c[v]);
  rep.check_geq("c_vw > 0", c[v] > 0 ? 1.0 : 0.0, 1.0);
  rep.check_close("d == 2 c gap_conditioned", d, 2 * c_total * to_double(gap0), 1e-9);
  rep.check_close("reflection: unfactored four-term form == d", d_reflected, d, 1e-9);

  const std::uint32_t excluded[] = {hi(w), lo(w)};
  const auto partitions = enumerate_partitions(cond, excluded, {kPartitionCap, options.workers});
  Rational total_prob = 0;
  double weighted = 0, worst_gap = 0, worst_log = 0, min_dc = std::numeric_limits<double>::infinity();
  double min_term = std::numeric_limits<double>::infinity();
  bool factorization = true, telescoping = true;
  for (const auto& part : partitions) {
    const auto dc = d_C_thm1(b, cond, w, part, options);
    total_prob += part.probability;
    weighted += to_double(part.probability) * dc.closed_form;
    worst_gap = std::max(worst_gap, std::abs(dc.closed_form - dc.via_patterns));
    min_dc = std::min(min_dc, dc.closed_form);
    factorization = factorization && dc.factorization_exact;
    for (const auto& t : dc.clusters) {
      min_term = std::min(min_term, t.term);
      telescoping = telescoping && relative_close(t.log_sum_minus, log_weight(t.p_minus), 1e-12) &&
                    relative_close(t.log_sum_plus, log_weight(t.p_plus), 1e-12);
      worst_log = std::max({worst_log, std::abs(t.log_sum_minus - log_weight(t.p_minus)),
                            std::abs(t.log_sum_plus - log_weight(t.p_plus))});
    }
  }
  rep.context()["partitions"] = partitions.size();
  rep.check_equal("partitions: sum of P(A_C) == 1", total_prob, 1);
  rep.check("P_C(C_i <-> w-/+ only) == p_i(1 - p_i') r_i exactly, all clusters", factorization);
  rep.check_close("d_C: closed form vs pattern sum (max deviation)", worst_gap, 0, 1e-9);
  rep.check("telescoping: sum of c_uw over C_i == -ln(1 - p_i) within 1e-12 relative", telescoping,
            "max absolute deviation " + format_double(worst_log));
  rep.check_close("decomposition: d == sum_C P(A_C) d_C", weighted, d, 1e-9);
  rep.check_geq("every summand >= 0 (minimum)", partitions.empty() ? 0.0 : min_term, -1e-12,
                "tolerance -1e-12");
  rep.check_geq("every d_C >= 0 (minimum)", partitions.empty() ? 0.0 : min_dc, -1e-12, "tolerance -1e-12");
  rep.check_geq("bunkbed gap >= 0", gap, 0);
  return rep;
}

VerificationReport weak_thm1_condition(const WeightedGraph& g, std::size_t v, std::size_t w,
                                       const EngineOptions& options) {
  if (v >= g.vertex_count() || w >= g.vertex_count() || v == w) throw InvalidInput("need two distinct vertices");
  const BunkbedGraph b(g);
  VerificationReport rep("weak-thm1-condition");
  describe_pair(rep, g, v, w);
  rep.check("p_vw > 0", !g.weight_between(v, w).is_zero());
  std::vector<ConnectivityEvent> events;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    events.push_back(ConnectivityEvent::connect(static_cast<std::uint32_t>(b.lower(u)),
                                                static_cast<std::uint32_t>(b.lower(w))));
    events.push_back(ConnectivityEvent::connect(static_cast<std::uint32_t>(b.lower(u)),
                                                static_cast<std::uint32_t>(b.upper(w))));
  }
  const auto p = event_probabilities(percolation_model(b), events, options).probabilities;
  for (std::size_t u = 0; u < g.vertex_count(); ++u) {
    if (u == w || u == v || g.weight_between(u, w).is_zero() || g.vertex_weight(u).is_one()) continue;
    rep.check_equal("P(" + g.id(u) + "- <-> w-) == P(v- <-> w-)", p[2 * u], p[2 * v]);
    rep.check_equal("P(" + g.id(u) + "- <-> w+) == P(v- <-> w+)", p[2 * u + 1], p[2 * v + 1]);
  }
  return rep;
}

}  // namespace bunkbed
