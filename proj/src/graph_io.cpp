#include "bunkbed/graph_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bunkbed/errors.hpp"

namespace bunkbed {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& message) {
  throw InvalidInput(field + ": " + message);
}

Probability probability_field(const nlohmann::json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "probability must be a string such as \"1/2\" or \"0.25\"");
  try {
    return Probability::parse(value.get<std::string>());
  } catch (const InvalidInput& e) {
    fail(field, e.what());
  }
}

std::string id_field(const nlohmann::json& value, const std::string& field) {
  if (!value.is_string()) fail(field, "vertex id must be a string");
  return value.get<std::string>();
}

}  // namespace

WeightedGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) fail("<root>", "expected an object");
  for (const char* key : {"vertices", "edges", "vertex_weights"})
    if (!doc.contains(key)) fail(key, "missing");
  const auto& vertices = doc["vertices"];
  const auto& edges = doc["edges"];
  const auto& weights = doc["vertex_weights"];
  if (!vertices.is_array()) fail("vertices", "expected an array");
  if (!edges.is_array()) fail("edges", "expected an array");
  if (!weights.is_object()) fail("vertex_weights", "expected an object");

  WeightedGraph g;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const std::string field = "vertices[" + std::to_string(i) + "]";
    const auto id = id_field(vertices[i], field);
    if (g.find(id)) fail(field, "duplicate vertex \"" + id + "\"");
    if (!weights.contains(id)) fail("vertex_weights", "no weight for vertex \"" + id + "\"");
    g.add_vertex(id, probability_field(weights[id], "vertex_weights." + id));
  }
  for (const auto& [id, value] : weights.items())
    if (!g.find(id)) fail("vertex_weights." + id, "unknown vertex");

  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string field = "edges[" + std::to_string(i) + "]";
    const auto& e = edges[i];
    if (!e.is_object()) fail(field, "expected an object with u, v, p");
    for (const char* key : {"u", "v", "p"})
      if (!e.contains(key)) fail(field + "." + key, "missing");
    const auto u = id_field(e["u"], field + ".u");
    const auto v = id_field(e["v"], field + ".v");
    const auto iu = g.find(u);
    const auto iv = g.find(v);
    if (!iu) fail(field + ".u", "unknown vertex \"" + u + "\"");
    if (!iv) fail(field + ".v", "unknown vertex \"" + v + "\"");
    if (*iu == *iv) fail(field, "loop at \"" + u + "\"");
    if (g.find_edge(*iu, *iv)) fail(field, "duplicate edge " + u + "-" + v);
    g.add_edge(*iu, *iv, probability_field(e["p"], field + ".p"));
  }
  return g;
}

nlohmann::ordered_json graph_to_json(const WeightedGraph& g) {
  nlohmann::ordered_json doc;
  doc["vertices"] = g.ids();
  doc["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : g.edges())
    doc["edges"].push_back({{"u", g.id(e.u)}, {"v", g.id(e.v)}, {"p", e.p.str()}});
  nlohmann::ordered_json weights = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < g.vertex_count(); ++i) weights[g.id(i)] = g.vertex_weight(i).str();
  doc["vertex_weights"] = std::move(weights);
  return doc;
}

WeightedGraph parse_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InvalidInput("line " + std::to_string(line) + ", column " + std::to_string(column) +
                       ": malformed JSON");
  }
  return graph_from_json(doc);
}

WeightedGraph load_graph(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open graph file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_graph(buffer.str());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace bunkbed
