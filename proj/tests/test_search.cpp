#include <doctest.h>

#include "bunkbed/errors.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/search.hpp"

using namespace bunkbed;

namespace {
Probability P(const char* s) { return Probability::parse(s); }

SearchConfig sweep(std::initializer_list<const char*> specs) {
  SearchConfig c;
  for (auto s : specs) c.classes.push_back(parse_class_spec(s));
  return c;
}
}  // namespace

TEST_CASE("nonisomorphic graph counts") {
  CHECK(nonisomorphic_graphs(1).size() == 1);
  CHECK(nonisomorphic_graphs(2).size() == 2);
  CHECK(nonisomorphic_graphs(3).size() == 4);
  CHECK(nonisomorphic_graphs(4).size() == 11);
  CHECK(nonisomorphic_graphs(5).size() == 34);
  CHECK(canonical_mask(3, 0b001) == canonical_mask(3, 0b100));
  CHECK_THROWS_AS(nonisomorphic_graphs(8), InvalidInput);
}

TEST_CASE("complete graphs: all gaps nonnegative, both theorems apply") {
  const auto c = sweep({"complete:2", "complete:3", "complete:4"});
  const auto r = verify_class(c.classes, c);
  CHECK(r.violations.empty());
  CHECK(r.clean());
  for (const auto& s : r.classes) {
    CHECK(s.checks > 0);
    CHECK(s.thm1 == s.checks);
    CHECK(s.uncovered == 0);
    CHECK(*s.min_gap > 0);
  }
  for (const auto& rec : r.records) CHECK(rec.engine == "exact");
}

TEST_CASE("complete bipartite: same side by thm2, cross side by thm1") {
  const auto c = sweep({"complete_bipartite:1,2", "complete_bipartite:2,2", "complete_bipartite:2,3",
                        "complete_bipartite:1,4"});
  const auto r = verify_class(c.classes, c);
  CHECK(r.violations.empty());
  for (const auto& rec : r.records) {
    CAPTURE(rec.instance);
    if (rec.pair_case == "cross-side") CHECK(rec.thm1);
    else CHECK(rec.thm2);
  }
  CHECK(r.coverage.count("thm1:complete_bipartite/cross-side") == 1);
  CHECK(r.coverage.count("thm2:complete_bipartite/same-side V1") == 1);
  CHECK(r.coverage.count("thm2:complete_bipartite/same-side V2") == 1);
}

TEST_CASE("pair selection") {
  auto c = sweep({"complete_bipartite:2,3"});
  c.p_grid = {P("1/2")};
  c.pairs = PairSelection::same_side;
  auto r = verify_class(c.classes, c);
  CHECK(r.checks == 4);
  c.pairs = PairSelection::cross_side;
  r = verify_class(c.classes, c);
  CHECK(r.checks == 6);
}

TEST_CASE("vertical subsets") {
  auto c = sweep({"complete:3"});
  c.p_grid = {P("1/2")};
  c.vertical = VerticalMode::subsets;
  const auto r = verify_class(c.classes, c);
  CHECK(r.instances_checked == 8);
  CHECK(r.checks == 24);
  CHECK(r.violations.empty());
}

TEST_CASE("engine selection and skipping") {
  auto c = sweep({"complete:5"});
  c.p_grid = {P("1/2")};
  c.engine = EngineChoice::exact;
  c.cap = 20;
  auto r = verify_class(c.classes, c);
  CHECK(r.skipped.size() == 1);
  CHECK(r.classes[0].skipped == 1);
  c.engine = EngineChoice::automatic;
  c.samples = 20000;
  r = verify_class(c.classes, c);
  CHECK(r.classes[0].mc == 10);
  CHECK(r.mc_flags == 0);
  for (const auto& rec : r.records) CHECK(rec.engine == "mc");
}

TEST_CASE("random search") {
  SearchConfig c;
  c.mode = SearchConfig::Mode::random;
  c.edge_palette = {P("0"), P("1/2")};
  c.vertex_palette = {P("0"), P("1/2"), P("1")};
  c.instances = 1000;
  c.seed = 7;
  c.keep_records = false;
  const auto r = run_search(c);
  CHECK(r.instances_checked == 1000);
  CHECK(r.violations.empty());
  CHECK(r.min_gap->value >= 0);
  // determinism, independent of workers
  c.workers = 1;
  const auto again = run_search(c);
  CHECK(again.to_json() == r.to_json());
}

TEST_CASE("exhaustive search") {
  SearchConfig c;
  c.mode = SearchConfig::Mode::exhaustive;
  c.max_vertices = 3;
  c.p_grid = {P("1/2")};
  auto r = run_search(c);
  CHECK(r.violations.empty());
  CHECK(r.graphs_by_size.at(3) == 4);
  // disconnected pairs have gap exactly zero
  bool saw_zero = false;
  for (const auto& rec : r.records)
    if (rec.instance == "n=3 edges=0x0") {
      CHECK(rec.gap == "0");
      saw_zero = true;
    }
  CHECK(saw_zero);
  c.max_vertices = 8;
  CHECK_THROWS_AS(run_search(c), InvalidInput);
}

TEST_CASE("config round trip and validation") {
  const auto doc = nlohmann::json::parse(R"({"mode": "class-sweep", "classes": ["complete:3", "complete_bipartite:2,2"],
      "p_grid": ["1/2"], "pairs": "same-side", "engine": "exact", "seed": 9})");
  const auto c = search_config_from_json(doc);
  CHECK(c.classes.size() == 2);
  CHECK(c.pairs == PairSelection::same_side);
  CHECK(c.engine == EngineChoice::exact);
  CHECK(c.seed == 9);
  const auto again = search_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  CHECK(to_json(again) == to_json(c));
  CHECK_THROWS_AS(search_config_from_json(nlohmann::json::parse(R"({"mode": "random", "bogus": 1})")), InvalidInput);
  CHECK_THROWS_AS(search_config_from_json(nlohmann::json::parse(R"({"mode": "exhaustive", "max_vertices": 8})")),
                  InvalidInput);
  CHECK_THROWS_AS(search_config_from_json(nlohmann::json::parse(R"({"mode": "random", "p_grid": ["2"]})")),
                  InvalidInput);
}

TEST_CASE("report serialization") {
  auto c = sweep({"complete:3"});
  c.p_grid = {P("1/2")};
  const auto r = verify_class(c.classes, c);
  const auto doc = r.to_json();
  CHECK(doc["violations"].empty());
  CHECK(doc["min_gap"]["exact"].is_string());
  const auto csv = r.to_csv();
  CHECK(csv.rfind("class,instances,checks,thm1,thm2,uncovered,exact,mc,mc_flags,skipped,min_gap\n", 0) == 0);
  CHECK(csv.find("complete:3,1,3,3,3,0,3,0,0,0,") != std::string::npos);
}
