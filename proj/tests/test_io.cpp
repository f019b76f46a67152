#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bunkbed/errors.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/graph_io.hpp"

using namespace bunkbed;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_graph(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

const char* kK2 = R"({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "p": "1/2"}],
                     "vertex_weights": {"a": "1/2", "b": "0.5"}})";

}  // namespace

TEST_CASE("valid K2 file") {
  const auto g = parse_graph(kK2);
  CHECK(g.vertex_count() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.vertex_weight(1).str() == "1/2");
  const auto path = std::filesystem::temp_directory_path() / "bunkbed_io_k2.json";
  std::ofstream(path) << kK2;
  CHECK(load_graph(path) == g);
  std::filesystem::remove(path);
}

TEST_CASE("rejected inputs carry diagnostics") {
  const auto range = error_of(R"({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "p": "3/2"}],
                                  "vertex_weights": {"a": "0", "b": "0"}})");
  CHECK(range.find("edges[0].p") != std::string::npos);
  CHECK(range.find("[0,1]") != std::string::npos);

  const auto dup = error_of(R"({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "p": "1/2"},
                                 {"u": "b", "v": "a", "p": "1/3"}], "vertex_weights": {"a": "0", "b": "0"}})");
  CHECK(dup.find("edges[1]") != std::string::npos);
  CHECK(dup.find("duplicate") != std::string::npos);

  CHECK(error_of(R"({"vertices": ["a"], "edges": [{"u": "a", "v": "a", "p": "1/2"}], "vertex_weights": {"a": "0"}})")
            .find("loop") != std::string::npos);
  CHECK(error_of(R"({"vertices": ["a", "a"], "edges": [], "vertex_weights": {"a": "0"}})").find("duplicate") !=
        std::string::npos);
  CHECK(error_of(R"({"vertices": ["a", "b"], "edges": [], "vertex_weights": {"a": "0"}})").find("vertex_weights") !=
        std::string::npos);
  CHECK(error_of(R"({"vertices": ["a"], "edges": [{"u": "a", "v": "z", "p": "1/2"}], "vertex_weights": {"a": "0"}})")
            .find("edges[0]") != std::string::npos);
  CHECK(error_of(R"({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b", "p": 0.5}],
                     "vertex_weights": {"a": "0", "b": "0"}})")
            .find("edges[0].p") != std::string::npos);
  const auto syntax = error_of("{\"vertices\": [\"a\",\n  }");
  CHECK(syntax.find("line 2") != std::string::npos);
  CHECK_THROWS_AS(load_graph("/nonexistent/graph.json"), InvalidInput);
}

TEST_CASE("round trip through JSON") {
  for (auto s : {"complete:4", "complete_bipartite:2,3", "complete_kpartite:3,2", "complete_minus_clique:5,2,pprime=1/3",
                 "cycle:6", "hypercube:3", "petersen"}) {
    auto spec = parse_class_spec(s, Probability(1, 3));
    const auto g = generate(spec);
    const auto text = graph_to_json(g).dump();
    CHECK(parse_graph(text) == g);
  }
  const auto doc = graph_to_json(generate(parse_class_spec("complete:2", Probability(1, 2))));
  CHECK(doc.dump() ==
        R"({"vertices":["a","b"],"edges":[{"u":"a","v":"b","p":"1/2"}],"vertex_weights":{"a":"1/2","b":"1/2"}})");
}
