#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bunkbed/cli.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/graph_io.hpp"

using namespace bunkbed;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("gap on K4") {
  const auto r = run({"gap", "--class", "complete:4", "--p", "1/2", "--v", "a", "--w", "b"});
  REQUIRE(r.code == 0);
  const auto doc = json_of(r);
  CHECK(doc["gap"] == "1233/16384");
  CHECK(doc["nonnegative"] == true);
}

TEST_CASE("K2 gap and exact event") {
  auto doc = json_of(run({"gap", "--class", "complete:2", "--p", "1/2", "--v", "a", "--w", "b"}));
  CHECK(doc["lower_lower"] == "9/16");
  CHECK(doc["lower_upper"] == "7/16");
  CHECK(doc["gap"] == "1/8");
  doc = json_of(run({"exact", "--class", "complete:2", "--p", "1/2", "--v", "a", "--w", "b", "--event", "lower-upper"}));
  CHECK(doc["probability"] == "7/16");
  const auto csv = run({"gap", "--class", "complete:2", "--p-grid", "1/4,1/2", "--v", "a", "--w", "b", "--format", "csv"});
  CHECK(csv.code == 0);
  CHECK(csv.out.find("1/2,a,b,9/16,7/16,1/8") != std::string::npos);
}

TEST_CASE("poly on K2") {
  const auto r = run({"poly", "--class", "complete:2", "--v", "a", "--w", "b"});
  REQUIRE(r.code == 0);
  const auto doc = json_of(r);
  CHECK(doc["coefficients"] == nlohmann::json({"0", "1", "-2", "1"}));
  CHECK(doc["verdict"] == "nonnegative");
}

TEST_CASE("theorem verifiers") {
  auto r = run({"verify-thm2", "--class", "complete_bipartite:2,2", "--p", "1/2", "--v", "V1_0", "--w", "V1_1"});
  CHECK(r.code == 0);
  CHECK(json_of(r)["passed"] == true);
  r = run({"verify-thm1", "--class", "complete_bipartite:2,3", "--p", "1/2", "--v", "V1_0", "--w", "V2_0"});
  CHECK(r.code == 0);
  r = run({"verify-thm1", "--class", "complete:3", "--p-grid", "1/4,1/2", "--v", "a", "--w", "b", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("p,assertion,relation,lhs,rhs,passed", 0) == 0);
  // hypothesis failure is an input error
  r = run({"verify-thm2", "--class", "complete_bipartite:2,3", "--p", "1/2", "--v", "V1_0", "--w", "V2_0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("hypothesis") != std::string::npos);
}

TEST_CASE("mc output") {
  const auto r = run({"mc", "--class", "complete:2", "--p", "1/2", "--v", "a", "--w", "b", "--samples", "20000", "--seed",
                      "3"});
  REQUIRE(r.code == 0);
  const auto doc = json_of(r);
  CHECK(std::abs(std::stod(doc["gap"].get<std::string>()) - 0.125) < 0.03);
  CHECK(doc["seed"] == 3);
  const auto again = run({"mc", "--class", "complete:2", "--p", "1/2", "--v", "a", "--w", "b", "--samples", "20000",
                          "--seed", "3", "--workers", "4"});
  CHECK(again.out == r.out);
}

TEST_CASE("gen round trip") {
  const auto r = run({"gen", "--class", "complete_minus_clique:5,2,pprime=1/4", "--p", "1/3"});
  REQUIRE(r.code == 0);
  const auto path = temp_file("bunkbed_cli_gen.json", r.out);
  const auto g = load_graph(path);
  CHECK(g == generate(parse_class_spec("complete_minus_clique:5,2,pprime=1/4", Probability(1, 3))));
  const auto gap = run({"gap", "--graph", path.string(), "--v", "V1_0", "--w", "V1_1"});
  CHECK(gap.code == 0);
  std::filesystem::remove(path);
}

TEST_CASE("check-class and search") {
  auto r = run({"check-class", "--class", "complete_bipartite:2,2", "--p-grid", "1/4,1/2,3/4", "--format", "csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("complete_bipartite:2,2,3,18,12,6,0,18,0,0,0,") != std::string::npos);
  const auto cfg = temp_file("bunkbed_cli_search.json", R"({"mode": "exhaustive", "max_vertices": 3, "p_grid": ["1/2"]})");
  r = run({"search", "--config", cfg.string()});
  CHECK(r.code == 0);
  CHECK(json_of(r)["violations"].empty());
  const auto bad = temp_file("bunkbed_cli_bad.json", R"({"mode": "exhaustive", "max_vertices": 9})");
  CHECK(run({"search", "--config", bad.string()}).code == 2);
  std::filesystem::remove(cfg);
  std::filesystem::remove(bad);
}

TEST_CASE("usage and input errors exit with 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"gap", "--v", "a", "--w", "b"}).code == 2);
  CHECK(run({"gap", "--class", "complete:2", "--graph", "x.json", "--p", "1/2", "--v", "a", "--w", "b"}).code == 2);
  CHECK(run({"gap", "--class", "complete:2", "--p", "3/2", "--v", "a", "--w", "b"}).code == 2);
  CHECK(run({"gap", "--class", "complete:2", "--p", "1/2", "--v", "a", "--w", "zz"}).code == 2);
  CHECK(run({"gap", "--class", "complete:9", "--p", "1/2", "--v", "a", "--w", "b"}).code == 2);
  CHECK(run({"gap", "--graph", "/nonexistent.json", "--v", "a", "--w", "b"}).code == 2);
  CHECK(run({"gap", "--class", "complete:2", "--p", "1/2", "--v", "a", "--w", "b", "--format", "xml"}).code == 2);
  const auto bad = temp_file("bunkbed_cli_dup.json", R"({"vertices": ["a", "b"],
      "edges": [{"u": "a", "v": "b", "p": "1/2"}, {"u": "a", "v": "b", "p": "1/2"}],
      "vertex_weights": {"a": "0", "b": "0"}})");
  const auto r = run({"exact", "--graph", bad.string(), "--v", "a", "--w", "b"});
  CHECK(r.code == 2);
  CHECK(r.err.find("edges[1]") != std::string::npos);
  std::filesystem::remove(bad);
  CHECK(run({"--help"}).code == 0);
}
