#include "bunkbed/generators.hpp"

#include <algorithm>
#include <charconv>

#include "bunkbed/errors.hpp"

namespace bunkbed {

namespace {

std::size_t parse_size(std::string_view s, std::string_view context) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw InvalidInput("bad size '" + std::string(s) + "' in class spec '" + std::string(context) + "'");
  return value;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = s.find(sep);
    out.push_back(s.substr(0, pos));
    if (pos == std::string_view::npos) break;
    s.remove_prefix(pos + 1);
  }
  return out;
}

VertexId letter_id(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "v" + std::to_string(i);
}

void require_sizes(const ClassSpec& spec, std::size_t count) {
  if (spec.sizes.size() != count)
    throw InvalidInput(std::string(class_name(spec.kind)) + " expects " + std::to_string(count) +
                       " size parameter(s)");
  for (auto s : spec.sizes)
    if (s < 1) throw InvalidInput("class size parameters must be >= 1");
}

void check_sizes(const ClassSpec& spec) {
  switch (spec.kind) {
    case GraphClass::complete:
    case GraphClass::hypercube:
      require_sizes(spec, 1);
      if (spec.kind == GraphClass::hypercube && spec.sizes[0] > 10) throw InvalidInput("hypercube dimension too large");
      break;
    case GraphClass::cycle:
      require_sizes(spec, 1);
      if (spec.sizes[0] < 3) throw InvalidInput("cycle needs at least 3 vertices");
      break;
    case GraphClass::complete_bipartite:
    case GraphClass::complete_kpartite:
      require_sizes(spec, 2);
      break;
    case GraphClass::complete_minus_clique:
      require_sizes(spec, 2);
      if (spec.sizes[1] > spec.sizes[0]) throw InvalidInput("clique larger than the graph");
      break;
    case GraphClass::petersen:
      if (!spec.sizes.empty()) throw InvalidInput("petersen takes no size parameters");
      break;
  }
}

void apply_vertical(const ClassSpec& spec, WeightedGraph& g) {
  switch (spec.vertical.kind) {
    case VerticalSpec::Kind::constant:
      for (std::size_t i = 0; i < g.vertex_count(); ++i) g.set_vertex_weight(i, spec.p);
      break;
    case VerticalSpec::Kind::subset:
      for (std::size_t i = 0; i < g.vertex_count(); ++i) g.set_vertex_weight(i, Probability::zero());
      for (const auto& id : spec.vertical.subset) g.set_vertex_weight(g.index_of(id), Probability::one());
      break;
    case VerticalSpec::Kind::explicit_map:
      for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        auto it = spec.vertical.weights.find(g.id(i));
        if (it == spec.vertical.weights.end())
          throw InvalidInput("no vertical weight for vertex '" + g.id(i) + "'");
        g.set_vertex_weight(i, it->second);
      }
      break;
  }
}

}  // namespace

VertexId partite_id(std::size_t part, std::size_t index) {
  return "V" + std::to_string(part) + "_" + std::to_string(index);
}

std::string_view class_name(GraphClass kind) {
  switch (kind) {
    case GraphClass::complete: return "complete";
    case GraphClass::complete_bipartite: return "complete_bipartite";
    case GraphClass::complete_kpartite: return "complete_kpartite";
    case GraphClass::complete_minus_clique: return "complete_minus_clique";
    case GraphClass::cycle: return "cycle";
    case GraphClass::hypercube: return "hypercube";
    case GraphClass::petersen: return "petersen";
  }
  return "?";
}

ClassSpec parse_class_spec(std::string_view text, Probability p) {
  ClassSpec spec;
  spec.p = p;
  auto colon = text.find(':');
  auto name = text.substr(0, colon);
  std::string_view args = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  bool found = false;
  for (auto k : {GraphClass::complete, GraphClass::complete_bipartite, GraphClass::complete_kpartite,
                 GraphClass::complete_minus_clique, GraphClass::cycle, GraphClass::hypercube,
                 GraphClass::petersen}) {
    if (class_name(k) == name) {
      spec.kind = k;
      found = true;
    }
  }
  if (!found) throw InvalidInput("unknown graph class '" + std::string(name) + "'");

  if (!args.empty()) {
    for (auto part : split(args, ',')) {
      if (part.starts_with("pprime=")) {
        spec.p_prime = Probability::parse(part.substr(7));
      } else {
        spec.sizes.push_back(parse_size(part, text));
      }
    }
  }
  if (spec.p_prime && spec.kind != GraphClass::complete_minus_clique)
    throw InvalidInput("pprime only applies to complete_minus_clique");
  check_sizes(spec);
  return spec;
}

std::string to_string(const ClassSpec& spec) {
  std::string out(class_name(spec.kind));
  for (std::size_t i = 0; i < spec.sizes.size(); ++i)
    out += (i == 0 ? ":" : ",") + std::to_string(spec.sizes[i]);
  if (spec.p_prime) out += ",pprime=" + spec.p_prime->str();
  return out;
}

std::vector<std::size_t> partite_parts(const ClassSpec& spec) {
  std::vector<std::size_t> parts;
  switch (spec.kind) {
    case GraphClass::complete_bipartite:
      require_sizes(spec, 2);
      parts.assign(spec.sizes[0], 1);
      parts.insert(parts.end(), spec.sizes[1], 2);
      break;
    case GraphClass::complete_kpartite:
      require_sizes(spec, 2);
      for (std::size_t k = 1; k <= spec.sizes[0]; ++k) parts.insert(parts.end(), spec.sizes[1], k);
      break;
    case GraphClass::complete_minus_clique:
      require_sizes(spec, 2);
      if (spec.sizes[1] > spec.sizes[0]) throw InvalidInput("clique larger than the graph");
      parts.assign(spec.sizes[1], 1);
      parts.insert(parts.end(), spec.sizes[0] - spec.sizes[1], 2);
      break;
    default:
      break;
  }
  return parts;
}

WeightedGraph generate(const ClassSpec& spec) {
  WeightedGraph g;
  switch (spec.kind) {
    case GraphClass::complete: {
      require_sizes(spec, 1);
      const auto n = spec.sizes[0];
      for (std::size_t i = 0; i < n; ++i) g.add_vertex(letter_id(i));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j, spec.p);
      break;
    }
    case GraphClass::complete_bipartite:
    case GraphClass::complete_kpartite:
    case GraphClass::complete_minus_clique: {
      auto parts = partite_parts(spec);
      std::vector<std::size_t> seen(parts.empty() ? 0 : *std::max_element(parts.begin(), parts.end()) + 1, 0);
      for (auto part : parts) g.add_vertex(partite_id(part, seen[part]++));
      const Probability inner = spec.p_prime.value_or(spec.p);
      for (std::size_t i = 0; i < parts.size(); ++i) {
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
          if (parts[i] != parts[j]) {
            g.add_edge(i, j, spec.p);
          } else if (spec.kind == GraphClass::complete_minus_clique && parts[i] == 2) {
            g.add_edge(i, j, inner);
          }
        }
      }
      break;
    }
    case GraphClass::cycle: {
      require_sizes(spec, 1);
      const auto n = spec.sizes[0];
      if (n < 3) throw InvalidInput("cycle needs at least 3 vertices");
      for (std::size_t i = 0; i < n; ++i) g.add_vertex(letter_id(i));
      for (std::size_t i = 0; i < n; ++i) g.add_edge(i, (i + 1) % n, spec.p);
      break;
    }
    case GraphClass::hypercube: {
      require_sizes(spec, 1);
      const auto d = spec.sizes[0];
      if (d > 10) throw InvalidInput("hypercube dimension too large");
      const std::size_t n = std::size_t{1} << d;
      for (std::size_t i = 0; i < n; ++i) {
        std::string bits(d, '0');
        for (std::size_t b = 0; b < d; ++b)
          if (i >> (d - 1 - b) & 1) bits[b] = '1';
        g.add_vertex(bits);
      }
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t b = 0; b < d; ++b) {
          std::size_t j = i ^ (std::size_t{1} << b);
          if (i < j) g.add_edge(i, j, spec.p);
        }
      break;
    }
    case GraphClass::petersen: {
      if (!spec.sizes.empty()) throw InvalidInput("petersen takes no size parameters");
      // Outer 5-cycle a..e, inner pentagram f..j, spokes a-f, b-g, ...
      for (std::size_t i = 0; i < 10; ++i) g.add_vertex(letter_id(i));
      for (std::size_t i = 0; i < 5; ++i) {
        g.add_edge(i, (i + 1) % 5, spec.p);
        g.add_edge(i, 5 + i, spec.p);
      }
      for (std::size_t i = 0; i < 5; ++i) g.add_edge(5 + i, 5 + (i + 2) % 5, spec.p);
      break;
    }
  }
  apply_vertical(spec, g);
  return g;
}

}  // namespace bunkbed
