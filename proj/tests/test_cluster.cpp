#include <doctest.h>

#include <cmath>

#include "bunkbed/cluster.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/exact.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/mc.hpp"
#include "bunkbed/symmetry.hpp"

using namespace bunkbed;

namespace {

Probability P(const char* s) { return Probability::parse(s); }
WeightedGraph cls(const char* spec, const char* p) { return generate(parse_class_spec(spec, P(p))); }
std::uint32_t u32(std::size_t x) { return static_cast<std::uint32_t>(x); }

std::vector<std::uint32_t> both_layers(const BunkbedGraph& b, std::initializer_list<std::size_t> base) {
  std::vector<std::uint32_t> out;
  for (auto x : base) {
    out.push_back(u32(b.upper(x)));
    out.push_back(u32(b.lower(x)));
  }
  return out;
}

Rational random_rational(StreamRng& rng) {
  const auto den = 1 + rng.next() % 12;
  Rational q(static_cast<long>(rng.next() % (den + 1)), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

WeightedGraph path_vuw(const char* p, const char* pu) {
  WeightedGraph g;
  g.add_vertex("v", P(p));
  g.add_vertex("u", P(pu));
  g.add_vertex("w", P(p));
  g.add_edge("v", "u", P(p));
  g.add_edge("u", "w", P(p));
  return g;
}

}  // namespace

TEST_CASE("enumerate_partitions examples") {
  const BunkbedGraph k2(cls("complete:2", "1/2"));
  const auto all = both_layers(k2, {0, 1});
  const auto parts = enumerate_partitions(k2, all);
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].clusters.empty());
  CHECK(parts[0].probability == 1);

  const BunkbedGraph path(path_vuw("1/2", "1/3"));
  const auto pp = enumerate_partitions(path, both_layers(path, {0, 2}));
  REQUIRE(pp.size() == 2);
  for (const auto& c : pp) {
    if (c.clusters.size() == 2) CHECK(c.probability == Rational(2, 3));
    else CHECK(c.probability == Rational(1, 3));
  }

  const BunkbedGraph k3(cls("complete:3", "1/2"));
  const auto kp = enumerate_partitions(k3, both_layers(k3, {0, 1}));
  REQUIRE(kp.size() == 2);
  for (const auto& c : kp) CHECK(c.probability == Rational(1, 2));
}

TEST_CASE("partition probabilities sum to one") {
  for (auto spec : {"complete:4", "complete_bipartite:2,3", "cycle:5", "complete_kpartite:3,2"}) {
    const BunkbedGraph b(cls(spec, "1/3"));
    Rational total = 0;
    for (const auto& c : enumerate_partitions(b, both_layers(b, {0, 1}))) total += c.probability;
    CHECK(total == 1);
  }
}

TEST_CASE("attach_probs examples") {
  const BunkbedGraph k3(cls("complete:3", "1/2"));
  const auto m = percolation_model(k3);
  const std::uint32_t up = u32(k3.upper(2)), lo = u32(k3.lower(2));
  const std::uint32_t vplus = u32(k3.upper(0));
  const std::uint32_t marked[] = {vplus};
  ClusterPartition split{{{up}, {lo}}, Rational(1, 2)};
  auto a = attach_probs(m, split, marked);
  CHECK(a.p[0][0] == Rational(1, 2));  // {u+} via v+u+
  CHECK(a.p[1][0] == 0);                // {u-} has no edge to v+
  ClusterPartition joined{{{up, lo}}, Rational(1, 2)};
  a = attach_probs(m, joined, marked);
  CHECK(a.p[0][0] == Rational(1, 2));
  const std::uint32_t bad[] = {up};
  CHECK_THROWS_AS(attach_probs(m, joined, bad), PreconditionError);
}

TEST_CASE("attach pattern probabilities") {
  const std::vector<Rational> zero(4, Rational(0));
  CHECK(attach_pattern_probability(zero, 0) == 1);
  CHECK(attach_at_most_one(zero) == 1);
  const std::vector<Rational> half(4, Rational(1, 2));
  CHECK(attach_pattern_probability(half, (1u << kVPlus) | (1u << kWPlus)) == Rational(1, 16));
  CHECK(attach_at_most_one(half) == Rational(5, 16));

  StreamRng rng(3, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> row(4);
    for (auto& x : row) x = random_rational(rng);
    Rational total = 0;
    for (std::uint32_t s = 0; s < 16; ++s) total += attach_pattern_probability(row, s);
    CHECK(total == 1);
    Rational small = 0;
    for (std::uint32_t s = 0; s < 16; ++s)
      if (__builtin_popcount(s) <= 1) small += attach_pattern_probability(row, s);
    CHECK(small == attach_at_most_one(row));
  }
}

TEST_CASE("joint attach patterns factor over clusters") {
  // Two clusters; each marked vertex has independent edges into them.
  StreamRng rng(11, 0);
  for (int trial = 0; trial < 20; ++trial) {
    // per (cluster, marked): one or two parallel edges
    std::vector<std::vector<std::vector<Rational>>> edges(2, std::vector<std::vector<Rational>>(4));
    std::vector<std::vector<Rational>> rows(2, std::vector<Rational>(4));
    std::vector<Rational> flat;
    for (int i = 0; i < 2; ++i)
      for (int k = 0; k < 4; ++k) {
        Rational none = 1;
        const int count = 1 + static_cast<int>(rng.next() % 2);
        for (int c = 0; c < count; ++c) {
          const auto p = random_rational(rng);
          edges[i][k].push_back(p);
          flat.push_back(p);
          none *= 1 - p;
        }
        rows[i][k] = 1 - none;
      }
    const std::uint32_t s0 = rng.next() % 16, s1 = rng.next() % 16;
    // brute force over all edge states
    Rational joint = 0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << flat.size()); ++mask) {
      Rational w = 1;
      std::size_t bit = 0;
      std::uint32_t seen[2] = {0, 0};
      for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 4; ++k)
          for (const auto& p : edges[i][k]) {
            const bool open = mask >> bit++ & 1u;
            w *= open ? p : 1 - p;
            if (open) seen[i] |= 1u << k;
          }
      if (seen[0] == s0 && seen[1] == s1) joint += w;
    }
    CHECK(joint == attach_pattern_probability(rows[0], s0) * attach_pattern_probability(rows[1], s1));
  }
}

TEST_CASE("d_KL examples") {
  using Row = std::vector<Rational>;
  const Row sym{Rational(1, 3), Rational(1, 3), Rational(1, 3), Rational(1, 3)};
  const std::vector<Row> k{sym}, none;
  CHECK(d_KL(k, none) == 0);

  const Row r1{Rational(1, 4), Rational(1, 2), Rational(1, 4), Rational(1, 2)};
  CHECK(d_KL(std::vector<Row>{r1}, none) == Rational(1, 16));

  const Row a{0, Rational(1, 2), 0, Rational(1, 2)};
  const Row b{Rational(1, 2), 0, Rational(1, 2), 0};
  const auto forms = d_KL_forms(std::vector<Row>{a}, std::vector<Row>{b});
  CHECK(forms.four_product == Rational(1, 16));
  CHECK(forms.squared == Rational(1, 16));

  const Row asym{Rational(1, 4), Rational(1, 2), Rational(1, 3), Rational(1, 2)};
  CHECK_THROWS_AS(d_KL(std::vector<Row>{asym}, none), SymmetryViolation);
}

TEST_CASE("d_KL four-product form equals squared form on random attach vectors") {
  StreamRng rng(2024, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t nk = 1 + rng.next() % 3, nl = rng.next() % 3;
    auto rows = [&](std::size_t n) {
      std::vector<std::vector<Rational>> out;
      for (std::size_t i = 0; i < n; ++i) {
        const auto minus = random_rational(rng), plus = random_rational(rng);
        out.push_back({minus, plus, minus, plus});
      }
      return out;
    };
    const auto f = d_KL_forms(rows(nk), rows(nl));
    CHECK(f.four_product == f.squared);
    CHECK(f.squared >= 0);
  }
}

TEST_CASE("d_C for the same-neighbour argument") {
  // K3 at 1/2, pair (a, b): the one cluster {c+, c-} is symmetric, so d_C = 0
  const auto g = cls("complete:3", "1/2");
  const BunkbedGraph b(g);
  const auto cond = thm2_conditioned(b, 0, 1);
  const auto w = marked_w(b, 0, 1);
  const auto parts = enumerate_partitions(cond, w);
  for (const auto& c : parts) {
    const auto dc = d_C_thm2(cond, w, c);
    CHECK(dc.agree());
    if (c.clusters.size() == 1) CHECK(dc.direct == 0);
  }
  CHECK_THROWS_AS(d_C_thm2(percolation_model(b), w, parts.front()), PreconditionError);

  // a cluster with no edges to W contributes nothing
  WeightedGraph iso = cls("complete_bipartite:2,2", "1/2");
  iso.add_vertex("z", P("1/2"));
  const BunkbedGraph bi(iso);
  const auto ci = thm2_conditioned(bi, 0, 1);
  const auto wi = marked_w(bi, 0, 1);
  for (const auto& c : enumerate_partitions(ci, wi)) CHECK(d_C_thm2(ci, wi, c).agree());

  // K_{2,2}, same side: formula equals direct enumeration on every partition
  const BunkbedGraph k22(cls("complete_bipartite:2,2", "1/2"));
  const auto c22 = thm2_conditioned(k22, 0, 1);
  const auto w22 = marked_w(k22, 0, 1);
  const auto p22 = enumerate_partitions(c22, w22);
  CHECK(p22.size() > 1);
  for (const auto& c : p22) {
    const auto dc = d_C_thm2(c22, w22, c);
    CHECK(dc.agree());
    CHECK(dc.direct >= 0);
  }
}

TEST_CASE("verify_thm2_decomposition") {
  struct Case {
    const char* spec;
    const char* p;
    std::size_t v, w;
  };
  for (auto c : {Case{"complete:3", "1/2", 0, 1}, Case{"complete_bipartite:2,2", "1/2", 0, 1},
                 Case{"complete_bipartite:2,3", "1/3", 0, 1}, Case{"complete_bipartite:2,3", "1/2", 2, 4},
                 Case{"complete_minus_clique:4,2", "1/2", 0, 1}, Case{"cycle:4", "1/4", 0, 2}}) {
    CAPTURE(c.spec);
    const auto rep = verify_thm2_decomposition(cls(c.spec, c.p), c.v, c.w);
    CHECK(rep.passed());
    CHECK(rep.assertions().size() >= 5);
  }
  CHECK_THROWS_AS(verify_thm2_decomposition(cls("complete_bipartite:2,3", "1/2"), 0, 2), HypothesisFailure);
}

TEST_CASE("verify_thm2 on random twin pairs") {
  const Probability palette[] = {P("0"), P("1/4"), P("1/2"), P("3/4")};
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    StreamRng rng(77, seed);
    const std::size_t n = 2 + rng.next() % 4;
    WeightedGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(std::string(1, char('a' + i)), palette[rng.next() % 4]);
    // vertices 0 and 1 get identical neighbourhoods
    for (std::size_t u = 2; u < n; ++u) {
      const auto& p = palette[rng.next() % 4];
      if (!p.is_zero()) {
        g.add_edge(0, u, p);
        g.add_edge(1, u, p);
      }
      for (std::size_t x = u + 1; x < n; ++x) {
        const auto& q = palette[rng.next() % 4];
        if (!q.is_zero()) g.add_edge(u, x, q);
      }
    }
    if (rng.next() % 2) g.add_edge(0, 1, palette[1 + rng.next() % 3]);
    REQUIRE(thm2_hypothesis(g, 0, 1));
    const auto rep = verify_thm2_decomposition(g, 0, 1);
    CHECK_MESSAGE(rep.passed(), rep.to_text());
  }
}

TEST_CASE("log weights") {
  CHECK(log_weight(0) == 0);
  CHECK(log_weight(1 - std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(log_weight(0.5) == doctest::Approx(0.6931471805599453).epsilon(1e-15));
  CHECK_THROWS_AS(log_weight(1), PreconditionError);
  const auto c = log_weights(path_vuw("1/2", "1/2"), 2);
  CHECK(c[0] == 0);
  CHECK(c[1] == doctest::Approx(std::log(2.0)));
  CHECK(c[2] == 0);
  auto heavy = path_vuw("1/2", "1/2");
  heavy.set_edge_weight(1, P("1"));
  CHECK_THROWS_AS(log_weights(heavy, 2), PreconditionError);
}

TEST_CASE("d_C for the local-symmetry argument") {
  // u - w with p_uw = 1/2, p_u = p_w = 0: clusters {u+}, {u-}, each term (1/2) ln 2
  WeightedGraph g;
  g.add_vertex("u", P("0"));
  g.add_vertex("w", P("0"));
  g.add_edge("u", "w", P("1/2"));
  const BunkbedGraph b(g);
  const auto m = thm1_conditioned(b, 1);
  const std::uint32_t wv[] = {u32(b.upper(1)), u32(b.lower(1))};
  const auto parts = enumerate_partitions(m, wv);
  REQUIRE(parts.size() == 1);
  const auto dc = d_C_thm1(b, m, 1, parts[0]);
  REQUIRE(dc.clusters.size() == 2);
  for (const auto& c : dc.clusters) {
    CHECK(c.r == 1);
    CHECK(c.term == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-12));
    CHECK(c.term == doctest::Approx(0.34657359).epsilon(1e-7));
  }
  CHECK(dc.closed_form == doctest::Approx(dc.via_patterns).epsilon(1e-12));
  CHECK(dc.factorization_exact);

  // symmetric clusters give zero
  auto sym = g;
  sym.set_vertex_weight(0, P("1/2"));
  const BunkbedGraph bs(sym);
  const auto ms = thm1_conditioned(bs, 1);
  for (const auto& c : enumerate_partitions(ms, wv)) {
    const auto d = d_C_thm1(bs, ms, 1, c);
    if (d.clusters.size() == 1) CHECK(std::abs(d.closed_form) < 1e-15);
    for (const auto& cl : d.clusters) CHECK(cl.term >= -1e-15);
  }
}

TEST_CASE("verify_thm1_decomposition") {
  struct Case {
    const char* spec;
    const char* p;
    std::size_t v, w;
  };
  for (auto c : {Case{"complete:3", "1/2", 0, 1}, Case{"complete:4", "1/4", 0, 1}, Case{"complete:4", "1/2", 2, 3},
                 Case{"complete_bipartite:2,3", "1/2", 0, 2}, Case{"complete_bipartite:2,3", "1/2", 3, 1},
                 Case{"cycle:5", "1/3", 0, 1}}) {
    CAPTURE(c.spec);
    const auto rep = verify_thm1_decomposition(cls(c.spec, c.p), c.v, c.w);
    CHECK_MESSAGE(rep.passed(), rep.to_text());
  }
  CHECK_THROWS_AS(verify_thm1_decomposition(path_vuw("1/2", "1/2"), 0, 2), HypothesisFailure);
  // p_v = 1: the gap vanishes
  auto g = cls("complete:3", "1/2");
  g.set_vertex_weight(0, P("1"));
  CHECK(verify_thm1_decomposition(g, 0, 1).passed());
}

TEST_CASE("weak transfer condition") {
  CHECK(weak_thm1_condition(cls("complete:4", "1/2"), 0, 1).passed());
  CHECK_FALSE(weak_thm1_condition(path_vuw("1/2", "1/2"), 0, 2).passed());
}
