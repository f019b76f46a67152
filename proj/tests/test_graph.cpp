#include <doctest.h>

#include <algorithm>
#include <set>

#include "bunkbed/errors.hpp"
#include "bunkbed/exact.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/graph.hpp"
#include "bunkbed/mc.hpp"
#include "bunkbed/symmetry.hpp"
#include "oracle.hpp"

using namespace bunkbed;

namespace {

Probability P(const char* s) { return Probability::parse(s); }

std::set<std::tuple<std::string, std::string, std::string>> edge_set(const WeightedGraph& g) {
  std::set<std::tuple<std::string, std::string, std::string>> out;
  for (const auto& e : g.edges()) {
    auto a = g.id(e.u), b = g.id(e.v);
    if (b < a) std::swap(a, b);
    out.insert({a, b, e.p.str()});
  }
  return out;
}

}  // namespace

TEST_CASE("probability parsing") {
  CHECK(P("1/2").str() == "1/2");
  CHECK(P("2/4").str() == "1/2");
  CHECK(P("0.125").str() == "1/8");
  CHECK(P("1").is_one());
  CHECK(P("0").is_zero());
  CHECK_THROWS_AS(P("3/2"), InvalidInput);
  CHECK_THROWS_AS(P("-1/2"), InvalidInput);
  CHECK_THROWS_AS(P("1/0"), InvalidInput);
  CHECK_THROWS_AS(P("abc"), InvalidInput);
  CHECK_THROWS_AS(P("1.5"), InvalidInput);
}

TEST_CASE("build_bunkbed examples") {
  WeightedGraph single;
  single.add_vertex("v", P("1/2"));
  const BunkbedGraph b1(single);
  CHECK(b1.doubled().vertex_count() == 2);
  REQUIRE(b1.doubled().edge_count() == 1);
  CHECK(b1.doubled().edges()[0].p == P("1/2"));

  const auto k2 = generate(parse_class_spec("complete:2", P("1/3")));
  const BunkbedGraph b2(k2);
  CHECK(b2.doubled().vertex_count() == 4);
  CHECK(b2.doubled().edge_count() == 4);
  // 4-cycle v- w- w+ v+
  CHECK(b2.doubled().find_edge(b2.lower(0), b2.lower(1)));
  CHECK(b2.doubled().find_edge(b2.lower(1), b2.upper(1)));
  CHECK(b2.doubled().find_edge(b2.upper(1), b2.upper(0)));
  CHECK(b2.doubled().find_edge(b2.upper(0), b2.lower(0)));
  for (const auto& e : b2.doubled().edges()) CHECK(e.p == P("1/3"));

  WeightedGraph k3;
  for (auto id : {"a", "b", "c"}) k3.add_vertex(id, P("1/7"));
  k3.add_edge("a", "b", P("1/2"));
  k3.add_edge("a", "c", P("1/3"));
  k3.add_edge("b", "c", P("1/5"));
  const BunkbedGraph b3(k3);
  CHECK(b3.doubled().vertex_count() == 6);
  CHECK(b3.doubled().edge_count() == 9);
  for (std::size_t e = 0; e < 3; ++e) {
    auto [hi, lo] = b3.horizontal_edges(e);
    CHECK(b3.doubled().edges()[hi].p == b3.doubled().edges()[lo].p);
  }
  CHECK(b3.doubled().id(0) == "a+");
  CHECK(b3.doubled().id(3) == "a-");
}

TEST_CASE("bunkbed sizes for generated classes") {
  for (auto s : {"complete:5", "complete_bipartite:2,3", "complete_kpartite:3,2", "complete_minus_clique:5,2", "cycle:6",
                 "hypercube:3", "petersen"}) {
    const auto g = generate(parse_class_spec(s, P("1/2")));
    const BunkbedGraph b(g);
    CHECK(b.doubled().vertex_count() == 2 * g.vertex_count());
    CHECK(b.doubled().edge_count() == 2 * g.edge_count() + g.vertex_count());
    CHECK(check_reflection_automorphism(b));
  }
}

TEST_CASE("generators") {
  const auto k23 = generate(parse_class_spec("complete_bipartite:2,3", P("1/2")));
  CHECK(k23.vertex_count() == 5);
  CHECK(k23.edge_count() == 6);
  for (const auto& e : k23.edges()) CHECK(e.p == P("1/2"));

  const auto cmc = generate(parse_class_spec("complete_minus_clique:5,2,pprime=0", P("1/3")));
  const auto k23b = generate(parse_class_spec("complete_bipartite:2,3", P("1/3")));
  CHECK(edge_set(normalize(cmc)) == edge_set(k23b));

  const auto c4 = generate(parse_class_spec("complete_kpartite:2,2", P("1/2")));
  CHECK(c4.vertex_count() == 4);
  CHECK(c4.edge_count() == 4);
  for (std::size_t v = 0; v < 4; ++v) {
    std::size_t deg = 0;
    for (const auto& e : c4.edges()) deg += (e.u == v) + (e.v == v);
    CHECK(deg == 2);
  }

  CHECK(generate(parse_class_spec("petersen", P("1/2"))).edge_count() == 15);
  CHECK(generate(parse_class_spec("hypercube:3", P("1/2"))).edge_count() == 12);
  CHECK(generate(parse_class_spec("cycle:5", P("1/2"))).edge_count() == 5);
  CHECK_THROWS_AS(parse_class_spec("complete:0"), InvalidInput);
  CHECK_THROWS_AS(parse_class_spec("complete_bipartite:2"), InvalidInput);
  CHECK_THROWS_AS(parse_class_spec("nonsense:3"), InvalidInput);
  CHECK(to_string(parse_class_spec("complete_minus_clique:5,2,pprime=1/4")) == "complete_minus_clique:5,2,pprime=1/4");

  ClassSpec h = parse_class_spec("complete:3", P("1/2"));
  h.vertical = VerticalSpec::on_subset({"b"});
  const auto gh = generate(h);
  CHECK(gh.vertex_weight(0).is_zero());
  CHECK(gh.vertex_weight(1).is_one());
}

TEST_CASE("normalize examples") {
  WeightedGraph g;
  for (auto id : {"a", "b", "c"}) g.add_vertex(id, P("1/2"));
  g.add_edge("a", "b", P("0"));
  g.add_edge("b", "c", P("1/2"));
  const auto n1 = normalize(g);
  CHECK(n1.vertex_count() == 3);
  CHECK(n1.edge_count() == 1);

  WeightedGraph path;
  for (auto id : {"v", "u", "w"}) path.add_vertex(id, P("1/2"));
  path.add_edge("v", "u", P("1"));
  path.add_edge("u", "w", P("1/3"));
  const auto n2 = normalize_mapped(path);
  CHECK(n2.graph.vertex_count() == 2);
  CHECK(n2.graph.edge_count() == 1);
  CHECK(n2.class_of[0] == n2.class_of[1]);

  WeightedGraph tri;
  for (auto id : {"a", "b", "c"}) tri.add_vertex(id, P("1/2"));
  tri.add_edge("a", "b", P("1"));
  tri.add_edge("a", "c", P("1/2"));
  tri.add_edge("b", "c", P("1/2"));
  const auto n3 = normalize_mapped(tri);
  REQUIRE(n3.graph.edge_count() == 1);
  CHECK(n3.graph.edges()[0].p == P("3/4"));
  // connection probability a-c is the same on both graphs
  const auto before = percolation_model(tri);
  const auto after = percolation_model(n3.graph);
  CHECK(oracle::probability(before, ConnectivityEvent::connect(0, 2)) ==
        oracle::probability(after, ConnectivityEvent::connect(static_cast<std::uint32_t>(n3.class_of[0]),
                                                              static_cast<std::uint32_t>(n3.class_of[2]))));
}

TEST_CASE("normalize preserves connection probabilities (random graphs, n <= 5)") {
  const Probability palette[] = {P("0"), P("1/4"), P("1/2"), P("1")};
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    StreamRng rng(99, seed);
    const std::size_t n = 2 + rng.next() % 4;
    WeightedGraph g;
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(std::string(1, char('a' + i)), P("1/2"));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng.next() % 3) g.add_edge(i, j, palette[rng.next() % 4]);
    const auto norm = normalize_mapped(g);
    const auto m0 = percolation_model(g);
    const auto m1 = percolation_model(norm.graph);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t c = a + 1; c < n; ++c) {
        const auto lhs = event_probability(m0, ConnectivityEvent::connect(a, c)).probability;
        const auto ca = static_cast<std::uint32_t>(norm.class_of[a]), cc = static_cast<std::uint32_t>(norm.class_of[c]);
        const auto rhs = event_probability(m1, ConnectivityEvent::connect(ca, cc)).probability;
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("weighted automorphisms") {
  const auto k22 = generate(parse_class_spec("complete_bipartite:2,2", P("1/2")));
  const Permutation id{0, 1, 2, 3};
  CHECK(is_weighted_automorphism(k22, id));
  const Permutation swap_sides{2, 3, 0, 1};
  CHECK(is_weighted_automorphism(k22, swap_sides));
  const auto k23 = generate(parse_class_spec("complete_bipartite:2,3", P("1/2")));
  CHECK_FALSE(is_weighted_automorphism(k23, transposition(5, 0, 2)));
  CHECK_THROWS_AS(is_weighted_automorphism(k23, Permutation{0, 0, 1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(is_weighted_automorphism(k23, Permutation{0, 1}), PreconditionError);

  auto g = k22;
  g.set_vertex_weight(0, P("1/3"));
  CHECK_FALSE(is_weighted_automorphism(g, swap_sides));
}

TEST_CASE("theorem hypotheses") {
  const auto k4 = generate(parse_class_spec("complete:4", P("1/3")));
  for (std::size_t v = 0; v < 4; ++v)
    for (std::size_t w = 0; w < 4; ++w)
      if (v != w) {
        CHECK(thm1_hypothesis(k4, v, w));
        CHECK(thm2_hypothesis(k4, v, w));
      }
  const auto k23 = generate(parse_class_spec("complete_bipartite:2,3", P("1/2")));
  CHECK(thm1_hypothesis(k23, 0, 2));
  CHECK(thm1_hypothesis(k23, 2, 0));
  CHECK(thm2_hypothesis(k23, 0, 1));
  CHECK(thm2_hypothesis(k23, 2, 4));
  CHECK_FALSE(thm2_hypothesis(k23, 0, 2));
  CHECK_THROWS_AS(thm2_hypothesis(k23, 1, 1), PreconditionError);

  WeightedGraph p3;
  for (auto id : {"v", "u", "w"}) p3.add_vertex(id, P("1/2"));
  p3.add_edge("v", "u", P("1/2"));
  p3.add_edge("u", "w", P("1/2"));
  CHECK_FALSE(thm1_hypothesis(p3, 0, 2));

  auto heavy = k4;
  heavy.set_edge_weight(0, P("1"));
  CHECK_THROWS_AS(thm1_hypothesis(heavy, 0, 1), PreconditionError);

  // p_v = 1 makes the hypothesis hold trivially as long as p_vw > 0
  auto lop = p3;
  lop.add_edge("v", "w", P("1/4"));
  lop.set_vertex_weight(0, P("1"));
  CHECK(thm1_hypothesis(lop, 0, 2));
}

TEST_CASE("thm2 hypothesis equals transposition automorphism (random graphs)") {
  const Probability palette[] = {P("0"), P("1/4"), P("1/2")};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    StreamRng rng(5, seed);
    const std::size_t n = 2 + rng.next() % 5;
    WeightedGraph g;
    // two vertex weights only, so that transpositions sometimes preserve them
    for (std::size_t i = 0; i < n; ++i) g.add_vertex(std::string(1, char('a' + i)), palette[rng.next() % 2]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto& p = palette[rng.next() % 3];
        if (!p.is_zero()) g.add_edge(i, j, p);
      }
    // the transposition also needs p_v = p_w; equalize them
    const std::size_t v = rng.next() % n;
    std::size_t w = rng.next() % n;
    if (w == v) w = (v + 1) % n;
    g.set_vertex_weight(w, g.vertex_weight(v));
    CHECK(thm2_hypothesis(g, v, w) == is_weighted_automorphism(g, transposition(n, v, w)));
  }
}

TEST_CASE("thm1 hypothesis is invariant under automorphic relabeling") {
  for (auto s : {"complete:4", "complete_bipartite:2,3", "cycle:5", "complete_kpartite:3,2", "hypercube:2"}) {
    const auto g = generate(parse_class_spec(s, P("1/2")));
    const std::size_t n = g.vertex_count();
    std::vector<std::pair<std::size_t, std::size_t>> none;
    // every automorphism found by pinning vertex 0 to each image
    for (std::size_t img = 0; img < n; ++img) {
      const std::pair<std::size_t, std::size_t> pin[] = {{0, img}};
      const auto phi = find_weighted_automorphism(g, pin);
      if (!phi) continue;
      REQUIRE(is_weighted_automorphism(g, *phi));
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t w = 0; w < n; ++w)
          if (v != w) CHECK(thm1_hypothesis(g, v, w) == thm1_hypothesis(g, (*phi)[v], (*phi)[w]));
    }
  }
}

TEST_CASE("reflection check rejects asymmetric layers") {
  const auto k2 = generate(parse_class_spec("complete:2", P("1/2")));
  const BunkbedGraph b(k2);
  CHECK(check_reflection_automorphism(b));
  WeightedGraph doubled = b.doubled();
  doubled.set_edge_weight(0, P("1/3"));
  CHECK_FALSE(check_reflection_automorphism(BunkbedGraph::from_parts(k2, doubled)));
}
