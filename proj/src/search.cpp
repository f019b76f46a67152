#include "bunkbed/search.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "bunkbed/enumeration.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/exact.hpp"
#include "bunkbed/mc.hpp"
#include "bunkbed/polynomial.hpp"
#include "bunkbed/report.hpp"
#include "bunkbed/symmetry.hpp"

namespace bunkbed {

std::string to_string(PairSelection s) {
  switch (s) {
    case PairSelection::all: return "all";
    case PairSelection::same_side: return "same-side";
    case PairSelection::cross_side: return "cross-side";
  }
  return "all";
}

std::string to_string(EngineChoice e) {
  switch (e) {
    case EngineChoice::automatic: return "auto";
    case EngineChoice::exact: return "exact";
    case EngineChoice::mc: return "mc";
  }
  return "auto";
}

namespace {

std::string mode_name(SearchConfig::Mode m) {
  switch (m) {
    case SearchConfig::Mode::class_sweep: return "class-sweep";
    case SearchConfig::Mode::random: return "random";
    case SearchConfig::Mode::exhaustive: return "exhaustive";
  }
  return "class-sweep";
}

[[noreturn]] void bad(const std::string& field, const std::string& msg) { throw InvalidInput(field + ": " + msg); }

std::vector<Probability> probability_list(const nlohmann::json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(field, "expected a non-empty array of probability strings");
  std::vector<Probability> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) bad(field + "[" + std::to_string(i) + "]", "expected a string");
    try {
      out.push_back(Probability::parse(j[i].get<std::string>()));
    } catch (const InvalidInput& e) {
      bad(field + "[" + std::to_string(i) + "]", e.what());
    }
  }
  return out;
}

template <class T>
T unsigned_field(const nlohmann::json& j, const std::string& field) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    bad(field, "expected a nonnegative integer");
  return j.get<T>();
}

nlohmann::ordered_json probability_array(const std::vector<Probability>& ps) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : ps) arr.push_back(p.str());
  return arr;
}

}  // namespace

SearchConfig search_config_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) bad("<root>", "expected an object");
  SearchConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "mode") {
      const auto m = value.is_string() ? value.get<std::string>() : "";
      if (m == "class-sweep") c.mode = SearchConfig::Mode::class_sweep;
      else if (m == "random") c.mode = SearchConfig::Mode::random;
      else if (m == "exhaustive") c.mode = SearchConfig::Mode::exhaustive;
      else bad(key, "expected class-sweep, random or exhaustive");
    } else if (key == "classes") {
      if (!value.is_array()) bad(key, "expected an array of class specs");
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string()) bad(key + "[" + std::to_string(i) + "]", "expected a string");
        try {
          c.classes.push_back(parse_class_spec(value[i].get<std::string>()));
        } catch (const InvalidInput& e) {
          bad(key + "[" + std::to_string(i) + "]", e.what());
        }
      }
    } else if (key == "p_grid") {
      c.p_grid = probability_list(value, key);
    } else if (key == "pairs") {
      const auto s = value.is_string() ? value.get<std::string>() : "";
      if (s == "all") c.pairs = PairSelection::all;
      else if (s == "same-side") c.pairs = PairSelection::same_side;
      else if (s == "cross-side") c.pairs = PairSelection::cross_side;
      else bad(key, "expected all, same-side or cross-side");
    } else if (key == "vertical") {
      const auto s = value.is_string() ? value.get<std::string>() : "";
      if (s == "constant") c.vertical = VerticalMode::constant;
      else if (s == "subsets") c.vertical = VerticalMode::subsets;
      else bad(key, "expected constant or subsets");
    } else if (key == "engine") {
      const auto s = value.is_string() ? value.get<std::string>() : "";
      if (s == "auto") c.engine = EngineChoice::automatic;
      else if (s == "exact") c.engine = EngineChoice::exact;
      else if (s == "mc") c.engine = EngineChoice::mc;
      else bad(key, "expected auto, exact or mc");
    } else if (key == "max_vertices") {
      c.max_vertices = unsigned_field<std::size_t>(value, key);
    } else if (key == "edge_palette") {
      c.edge_palette = probability_list(value, key);
    } else if (key == "vertex_palette") {
      c.vertex_palette = probability_list(value, key);
    } else if (key == "instances") {
      c.instances = unsigned_field<std::size_t>(value, key);
    } else if (key == "samples") {
      c.samples = unsigned_field<std::uint64_t>(value, key);
      if (c.samples < 1) bad(key, "must be >= 1");
    } else if (key == "seed") {
      c.seed = unsigned_field<std::uint64_t>(value, key);
    } else if (key == "cap") {
      c.cap = unsigned_field<std::size_t>(value, key);
    } else if (key == "workers") {
      c.workers = static_cast<int>(unsigned_field<unsigned>(value, key));
    } else if (key == "flag_sigmas") {
      if (!value.is_number() || value.get<double>() <= 0) bad(key, "expected a positive number");
      c.flag_sigmas = value.get<double>();
    } else if (key == "keep_records") {
      if (!value.is_boolean()) bad(key, "expected true or false");
      c.keep_records = value.get<bool>();
    } else {
      bad(key, "unknown field");
    }
  }
  if (c.mode == SearchConfig::Mode::exhaustive && c.max_vertices > 7) bad("max_vertices", "must be <= 7 for exhaustive mode");
  if (c.mode == SearchConfig::Mode::random && c.max_vertices < 1) bad("max_vertices", "must be >= 1");
  if (c.mode == SearchConfig::Mode::class_sweep && c.classes.empty()) bad("classes", "class-sweep needs at least one class");
  return c;
}

nlohmann::ordered_json to_json(const SearchConfig& c) {
  nlohmann::ordered_json doc;
  doc["mode"] = mode_name(c.mode);
  auto classes = nlohmann::ordered_json::array();
  for (const auto& s : c.classes) classes.push_back(to_string(s));
  doc["classes"] = std::move(classes);
  doc["p_grid"] = probability_array(c.p_grid);
  doc["pairs"] = to_string(c.pairs);
  doc["vertical"] = c.vertical == VerticalMode::constant ? "constant" : "subsets";
  doc["max_vertices"] = c.max_vertices;
  doc["edge_palette"] = probability_array(c.edge_palette);
  doc["vertex_palette"] = probability_array(c.vertex_palette);
  doc["instances"] = c.instances;
  doc["samples"] = c.samples;
  doc["seed"] = c.seed;
  doc["engine"] = to_string(c.engine);
  doc["cap"] = c.cap;
  doc["workers"] = c.workers;
  doc["flag_sigmas"] = c.flag_sigmas;
  doc["keep_records"] = c.keep_records;
  return doc;
}

// Report -----------------------------------------------------------------------

nlohmann::ordered_json SearchReport::to_json() const {
  nlohmann::ordered_json doc;
  doc["mode"] = mode;
  doc["instances_checked"] = instances_checked;
  doc["checks"] = checks;
  doc["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : violations)
    doc["violations"].push_back(
        {{"instance", v.instance}, {"v", v.v}, {"w", v.w}, {"p", v.p}, {"gap", v.gap}, {"transcript", v.transcript}});
  if (min_gap) {
    nlohmann::ordered_json m;
    m["value"] = min_gap->value;
    if (!min_gap->exact.empty()) m["exact"] = min_gap->exact;
    m["instance"] = min_gap->instance;
    m["v"] = min_gap->v;
    m["w"] = min_gap->w;
    m["p"] = min_gap->p;
    doc["min_gap"] = std::move(m);
  } else {
    doc["min_gap"] = nullptr;
  }
  doc["mc_flags"] = mc_flags;
  doc["flags_cleared"] = flags_cleared;
  doc["flags_unresolved"] = flags_unresolved;
  doc["coverage"] = coverage;
  if (!graphs_by_size.empty()) {
    nlohmann::ordered_json sizes;
    for (auto [n, count] : graphs_by_size) sizes[std::to_string(n)] = count;
    doc["graphs_by_size"] = std::move(sizes);
  }
  auto cls = nlohmann::ordered_json::array();
  for (const auto& c : classes) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    item["instances"] = c.instances;
    item["checks"] = c.checks;
    item["thm1"] = c.thm1;
    item["thm2"] = c.thm2;
    item["uncovered"] = c.uncovered;
    item["exact"] = c.exact;
    item["mc"] = c.mc;
    item["mc_flags"] = c.mc_flags;
    item["skipped"] = c.skipped;
    item["min_gap"] = c.min_gap ? nlohmann::ordered_json(*c.min_gap) : nlohmann::ordered_json(nullptr);
    cls.push_back(std::move(item));
  }
  doc["classes"] = std::move(cls);
  doc["skipped"] = skipped;
  if (!records.empty()) {
    auto recs = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      nlohmann::ordered_json item;
      item["instance"] = r.instance;
      item["v"] = r.v;
      item["w"] = r.w;
      item["p"] = r.p;
      item["engine"] = r.engine;
      item["gap"] = r.gap;
      if (r.engine == "mc") item["stderr"] = r.standard_error;
      item["thm1"] = r.thm1;
      item["thm2"] = r.thm2;
      if (!r.pair_case.empty()) item["case"] = r.pair_case;
      recs.push_back(std::move(item));
    }
    doc["records"] = std::move(recs);
  }
  return doc;
}

std::string SearchReport::to_csv() const {
  std::ostringstream out;
  out << "class,instances,checks,thm1,thm2,uncovered,exact,mc,mc_flags,skipped,min_gap\n";
  for (const auto& c : classes) {
    out << c.name << "," << c.instances << "," << c.checks << "," << c.thm1 << "," << c.thm2 << "," << c.uncovered
        << "," << c.exact << "," << c.mc << "," << c.mc_flags << "," << c.skipped << ","
        << (c.min_gap ? format_double(*c.min_gap) : "") << "\n";
  }
  return out.str();
}

// Instance checking --------------------------------------------------------------

namespace {

struct PairResult {
  std::size_t v = 0, w = 0;
  bool exact = false;
  Rational gap;
  double value = 0;
  double standard_error = 0;
  bool flagged = false;
};

struct InstanceResult {
  std::string name;
  std::string p;
  std::vector<PairResult> pairs;
  std::vector<GapRecord> records;
  std::vector<Violation> violations;
  std::size_t flags = 0, cleared = 0, unresolved = 0;
  std::optional<std::string> skipped;
};

bool thm1_either(const WeightedGraph& g, std::size_t v, std::size_t w) {
  try {
    return thm1_hypothesis(g, v, w) || thm1_hypothesis(g, w, v);
  } catch (const PreconditionError&) {
    return false;  // weight-1 edges are outside the theorem's domain
  }
}

nlohmann::ordered_json recompute(const WeightedGraph& g, std::size_t v, std::size_t w, std::size_t cap,
                                 Rational& gap) {
  const BunkbedGraph b(g);
  const auto model = percolation_model(b);
  const auto vm = static_cast<std::uint32_t>(b.lower(v));
  const ConnectivityEvent events[] = {ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.lower(w))),
                                      ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.upper(w)))};
  nlohmann::ordered_json t;
  const EngineOptions one{cap, 1};
  const auto same = event_probability(model, events[0], one);
  const auto cross = event_probability(model, events[1], one);
  gap = same.probability - cross.probability;
  t["engine"] = "exact";
  t["P(v-<->w-)"] = to_string(same.probability);
  t["P(v-<->w+)"] = to_string(cross.probability);
  t["gap"] = to_string(gap);
  t["configurations_evaluated"] = same.configurations_evaluated + cross.configurations_evaluated;
  if (free_edge_count(model) <= 22) {
    const auto ref = reference_event_probabilities(model, events);
    t["reference_gap"] = to_string(ref[0] - ref[1]);
    if (ref[0] - ref[1] != gap) t["reference_mismatch"] = true;
  }
  return t;
}

// Checks every listed pair of one weighted graph.
InstanceResult check_instance(const WeightedGraph& g, std::string name, const std::string& p,
                              const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                              const SearchConfig& config, int workers) {
  InstanceResult r;
  r.name = std::move(name);
  r.p = p;
  if (pairs.empty()) return r;
  const BunkbedGraph b(g);
  const auto model = percolation_model(b);
  const std::size_t m = free_edge_count(model);
  bool use_exact = config.engine == EngineChoice::exact || (config.engine == EngineChoice::automatic && m <= config.cap);
  if (config.engine == EngineChoice::exact && m > config.cap) {
    r.skipped = r.name + ": " + std::to_string(m) + " free edges exceed the cap of " + std::to_string(config.cap);
    return r;
  }
  if (use_exact) {
    std::vector<ConnectivityEvent> events;
    for (auto [v, w] : pairs) {
      const auto vm = static_cast<std::uint32_t>(b.lower(v));
      events.push_back(ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.lower(w))));
      events.push_back(ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.upper(w))));
    }
    const auto probs = event_probabilities(model, events, {config.cap, workers}).probabilities;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      PairResult pr;
      pr.v = pairs[k].first;
      pr.w = pairs[k].second;
      pr.exact = true;
      pr.gap = probs[2 * k] - probs[2 * k + 1];
      pr.value = to_double(pr.gap);
      r.pairs.push_back(std::move(pr));
    }
  } else {
    const auto est = mc_bunkbed_gaps(b, pairs, {config.samples, config.seed, workers});
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      PairResult pr;
      pr.v = pairs[k].first;
      pr.w = pairs[k].second;
      pr.value = est[k].gap;
      pr.standard_error = est[k].paired_standard_error;
      pr.flagged = est[k].flagged(config.flag_sigmas);
      r.pairs.push_back(std::move(pr));
    }
  }

  for (auto& pr : r.pairs) {
    const bool suspicious = pr.exact ? sgn(pr.gap) < 0 : pr.flagged;
    if (!suspicious) continue;
    if (!pr.exact) ++r.flags;
    if (!pr.exact && m > config.cap) {
      ++r.unresolved;
      continue;
    }
    Rational confirmed;
    auto transcript = recompute(g, pr.v, pr.w, std::max(config.cap, m), confirmed);
    if (sgn(confirmed) < 0) {
      r.violations.push_back({r.name, g.id(pr.v), g.id(pr.w), p, to_string(confirmed), std::move(transcript)});
    } else if (!pr.exact) {
      ++r.cleared;
    }
  }
  return r;
}

std::vector<std::pair<std::size_t, std::size_t>> all_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = v + 1; w < n; ++w) out.emplace_back(v, w);
  return out;
}

void absorb(SearchReport& report, ClassSummary& summary, InstanceResult&& r, const WeightedGraph& g,
            const std::vector<std::size_t>& parts, const std::string& class_label, bool keep_records) {
  ++summary.instances;
  ++report.instances_checked;
  if (r.skipped) {
    ++summary.skipped;
    report.skipped.push_back(*r.skipped);
    return;
  }
  for (const auto& pr : r.pairs) {
    ++summary.checks;
    ++report.checks;
    (pr.exact ? summary.exact : summary.mc)++;
    if (pr.flagged) ++summary.mc_flags;
    GapRecord rec;
    rec.instance = r.name;
    rec.v = g.id(pr.v);
    rec.w = g.id(pr.w);
    rec.p = r.p;
    rec.engine = pr.exact ? "exact" : "mc";
    rec.gap = pr.exact ? to_string(pr.gap) : format_double(pr.value);
    rec.gap_value = pr.value;
    rec.standard_error = pr.standard_error;
    rec.thm1 = thm1_either(g, pr.v, pr.w);
    rec.thm2 = thm2_hypothesis(g, pr.v, pr.w);
    if (!parts.empty())
      rec.pair_case = parts[pr.v] == parts[pr.w] ? "same-side V" + std::to_string(parts[pr.v]) : "cross-side";
    const std::string where = class_label + (rec.pair_case.empty() ? "" : "/" + rec.pair_case);
    if (rec.thm1) {
      ++summary.thm1;
      report.coverage.insert("thm1:" + where);
    }
    if (rec.thm2) {
      ++summary.thm2;
      report.coverage.insert("thm2:" + where);
    }
    if (!rec.thm1 && !rec.thm2) ++summary.uncovered;
    if (!summary.min_gap || pr.value < *summary.min_gap) summary.min_gap = pr.value;
    if (!report.min_gap || pr.value < report.min_gap->value)
      report.min_gap = MinimumGap{pr.value, pr.exact ? to_string(pr.gap) : "", r.name, rec.v, rec.w, r.p};
    if (keep_records) report.records.push_back(std::move(rec));
  }
  report.mc_flags += r.flags;
  report.flags_cleared += r.cleared;
  report.flags_unresolved += r.unresolved;
  for (auto& v : r.violations) report.violations.push_back(std::move(v));
}

std::string subset_label(const WeightedGraph& g, std::uint64_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < g.vertex_count(); ++i)
    if (mask >> i & 1u) {
      s += (first ? "" : ",") + g.id(i);
      first = false;
    }
  return s + "}";
}

}  // namespace

SearchReport verify_class(const std::vector<ClassSpec>& specs, const SearchConfig& config) {
  SearchReport report;
  report.mode = "class-sweep";
  for (const auto& base : specs) {
    ClassSummary summary;
    summary.name = to_string(base);
    const std::string label(class_name(base.kind));
    for (const auto& p : config.p_grid) {
      ClassSpec spec = base;
      spec.p = p;
      spec.vertical = VerticalSpec::constant();
      WeightedGraph g = generate(spec);
      const auto parts = partite_parts(spec);
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (auto [v, w] : all_pairs(g.vertex_count())) {
        if (!parts.empty() && config.pairs == PairSelection::same_side && parts[v] != parts[w]) continue;
        if (!parts.empty() && config.pairs == PairSelection::cross_side && parts[v] == parts[w]) continue;
        pairs.emplace_back(v, w);
      }
      const std::string name = summary.name + " p=" + p.str();
      if (config.vertical == VerticalMode::constant) {
        absorb(report, summary, check_instance(g, name, p.str(), pairs, config, config.workers), g, parts, label,
               config.keep_records);
        continue;
      }
      if (g.vertex_count() > 12) throw InvalidInput("vertical subsets need at most 12 vertices");
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.vertex_count()); ++mask) {
        for (std::size_t i = 0; i < g.vertex_count(); ++i)
          g.set_vertex_weight(i, (mask >> i & 1u) ? Probability::one() : Probability::zero());
        absorb(report, summary,
               check_instance(g, name + " H=" + subset_label(g, mask), p.str(), pairs, config, config.workers), g,
               parts, label, config.keep_records);
      }
    }
    report.classes.push_back(std::move(summary));
  }
  return report;
}

SearchReport search_random(const SearchConfig& config) {
  if (config.max_vertices < 1) throw InvalidInput("max_vertices must be >= 1");
  if (config.edge_palette.empty() || config.vertex_palette.empty()) throw InvalidInput("empty weight palette");
  const std::size_t count = config.instances;
  std::vector<WeightedGraph> graphs(count);
  std::vector<InstanceResult> results(count);

#pragma omp parallel for schedule(dynamic, 1) num_threads(enumeration::resolve_workers(config.workers))
  for (long i = 0; i < static_cast<long>(count); ++i) {
    StreamRng rng(config.seed, static_cast<std::uint64_t>(i));
    const std::size_t n = 1 + rng.next() % config.max_vertices;
    WeightedGraph g;
    for (std::size_t u = 0; u < n; ++u)
      g.add_vertex(std::string(1, static_cast<char>('a' + u)),
                   config.vertex_palette[rng.next() % config.vertex_palette.size()]);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) {
        const auto& p = config.edge_palette[rng.next() % config.edge_palette.size()];
        if (!p.is_zero()) g.add_edge(u, v, p);
      }
    results[i] = check_instance(g, "random#" + std::to_string(i), "", all_pairs(n), config, 1);
    graphs[i] = std::move(g);
  }

  SearchReport report;
  report.mode = "random";
  std::map<std::size_t, ClassSummary> by_size;
  for (std::size_t i = 0; i < count; ++i) {
    auto& summary = by_size[graphs[i].vertex_count()];
    summary.name = "random n=" + std::to_string(graphs[i].vertex_count());
    absorb(report, summary, std::move(results[i]), graphs[i], {}, "random", config.keep_records);
  }
  for (auto& [n, s] : by_size) report.classes.push_back(std::move(s));
  return report;
}

// Exhaustive -------------------------------------------------------------------

namespace {

struct PairTable {
  std::size_t n;
  std::vector<std::vector<int>> index;
  explicit PairTable(std::size_t n_) : n(n_), index(n_, std::vector<int>(n_, -1)) {
    int k = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) index[i][j] = index[j][i] = k++;
  }
  std::uint32_t permute(std::uint32_t mask, const std::vector<std::size_t>& perm) const {
    std::uint32_t out = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (mask >> index[i][j] & 1u) out |= 1u << index[perm[i]][perm[j]];
    return out;
  }
};

bool is_canonical(const PairTable& t, std::uint32_t mask) {
  std::vector<std::size_t> perm(t.n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end()))
    if (t.permute(mask, perm) < mask) return false;
  return true;
}

}  // namespace

std::uint32_t canonical_mask(std::size_t n, std::uint32_t mask) {
  if (n > 7) throw InvalidInput("canonical forms are limited to 7 vertices");
  const PairTable t(n);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = mask;
  do {
    best = std::min(best, t.permute(mask, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<std::uint32_t> nonisomorphic_graphs(std::size_t n) {
  if (n > 7) throw InvalidInput("exhaustive enumeration is limited to 7 vertices");
  const PairTable t(n);
  const std::uint32_t limit = std::uint32_t{1} << (n * (n - (n > 0 ? 1 : 0)) / 2);
  std::vector<std::uint32_t> out;
  for (std::uint32_t mask = 0; mask < limit; ++mask)
    if (is_canonical(t, mask)) out.push_back(mask);
  return out;
}

WeightedGraph graph_from_mask(std::size_t n, std::uint32_t mask, const Probability& p) {
  WeightedGraph g;
  for (std::size_t u = 0; u < n; ++u) g.add_vertex(std::string(1, static_cast<char>('a' + u)), p);
  int k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j, ++k)
      if (mask >> k & 1u) g.add_edge(i, j, p);
  return g;
}

SearchReport search_exhaustive(const SearchConfig& config) {
  if (config.max_vertices > 7) throw InvalidInput("exhaustive search is limited to 7 vertices");
  SearchReport report;
  report.mode = "exhaustive";

  for (std::size_t n = 1; n <= config.max_vertices; ++n) {
    const auto masks = nonisomorphic_graphs(n);
    report.graphs_by_size[n] = masks.size();
    const auto pairs = all_pairs(n);
    // Per graph, one symbolic enumeration gives the gap polynomial of every pair.
    std::vector<std::vector<InstanceResult>> results(masks.size());
    std::vector<WeightedGraph> graphs(masks.size());

#pragma omp parallel for schedule(dynamic, 1) num_threads(enumeration::resolve_workers(config.workers))
    for (long i = 0; i < static_cast<long>(masks.size()); ++i) {
      std::ostringstream name;
      name << "n=" << n << " edges=0x" << std::hex << masks[i];
      WeightedGraph g = graph_from_mask(n, masks[i], Probability(1, 2));
      std::vector<InstanceResult> per_p;
      const BunkbedGraph b(g);
      const auto model = percolation_model(b);
      std::vector<ConnectivityEvent> events;
      for (auto [v, w] : pairs) {
        const auto vm = static_cast<std::uint32_t>(b.lower(v));
        events.push_back(ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.lower(w))));
        events.push_back(ConnectivityEvent::connect(vm, static_cast<std::uint32_t>(b.upper(w))));
      }
      const std::vector<std::uint32_t> classes(model.edges.size(), 0);
      std::vector<RationalPolynomial> polys;
      std::optional<std::string> skipped;
      try {
        polys = event_polynomials(model, classes, events, {config.cap, 1});
      } catch (const CapExceeded& e) {
        skipped = name.str() + ": " + e.what();
      }
      for (const auto& p : config.p_grid) {
        InstanceResult r;
        r.name = name.str();
        r.p = p.str();
        r.skipped = skipped;
        if (!skipped) {
          for (std::size_t k = 0; k < pairs.size(); ++k) {
            PairResult pr;
            pr.v = pairs[k].first;
            pr.w = pairs[k].second;
            pr.exact = true;
            pr.gap = polys[2 * k](p.value()) - polys[2 * k + 1](p.value());
            pr.value = to_double(pr.gap);
            if (sgn(pr.gap) < 0) {
              Rational confirmed;
              WeightedGraph gp = graph_from_mask(n, masks[i], p);
              auto transcript = recompute(gp, pr.v, pr.w, std::max<std::size_t>(config.cap, 64), confirmed);
              if (sgn(confirmed) < 0)
                r.violations.push_back({r.name, g.id(pr.v), g.id(pr.w), r.p, to_string(confirmed), std::move(transcript)});
            }
            r.pairs.push_back(std::move(pr));
          }
        }
        per_p.push_back(std::move(r));
      }
      results[i] = std::move(per_p);
      graphs[i] = std::move(g);
    }

    ClassSummary summary;
    summary.name = "graphs n=" + std::to_string(n);
    for (std::size_t i = 0; i < masks.size(); ++i)
      for (auto& r : results[i]) absorb(report, summary, std::move(r), graphs[i], {}, "graphs", config.keep_records);
    report.classes.push_back(std::move(summary));
  }
  return report;
}

SearchReport run_search(const SearchConfig& config) {
  switch (config.mode) {
    case SearchConfig::Mode::class_sweep: return verify_class(config.classes, config);
    case SearchConfig::Mode::random: return search_random(config);
    case SearchConfig::Mode::exhaustive: return search_exhaustive(config);
  }
  return {};
}

}  // namespace bunkbed
