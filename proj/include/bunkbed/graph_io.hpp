#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bunkbed/graph.hpp"

namespace bunkbed {

/// {"vertices": [...], "edges": [{"u","v","p"}], "vertex_weights": {...}}
/// Errors are InvalidInput naming the offending field, e.g. "edges[2].p".
WeightedGraph graph_from_json(const nlohmann::json& doc);
nlohmann::ordered_json graph_to_json(const WeightedGraph& g);

/// Parses text; syntax errors report line and column.
WeightedGraph parse_graph(std::string_view text);
WeightedGraph load_graph(const std::filesystem::path& path);

}  // namespace bunkbed
