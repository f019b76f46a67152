#include "bunkbed/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "bunkbed/cluster.hpp"
#include "bunkbed/errors.hpp"
#include "bunkbed/exact.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/graph_io.hpp"
#include "bunkbed/mc.hpp"
#include "bunkbed/polynomial.hpp"
#include "bunkbed/report.hpp"
#include "bunkbed/search.hpp"

namespace bunkbed::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

struct Options {
  std::string graph_path;
  std::string class_spec;
  std::string v, w;
  std::string p;
  std::string p_grid;
  std::string h;
  std::string event = "lower-lower";
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t cap = 30;
  int workers = 0;
  std::string format = "json";
  std::string out_path;
  std::string config_path;
  std::string pairs = "all";
  std::string engine = "auto";
  std::string vertical = "constant";
  bool weak = false;
};

// One graph to work on, with the p it was generated at ("" for files).
struct Instance {
  WeightedGraph graph;
  std::string p;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::vector<Probability> p_values(const Options& o) {
  std::vector<Probability> out;
  if (!o.p.empty()) out.push_back(Probability::parse(o.p));
  for (const auto& s : split_list(o.p_grid)) out.push_back(Probability::parse(s));
  return out;
}

std::vector<Instance> instances(const Options& o, bool need_p = true) {
  if (o.graph_path.empty() == o.class_spec.empty()) throw InvalidInput("give exactly one of --graph and --class");
  std::vector<std::string> h = split_list(o.h);
  if (!o.graph_path.empty()) {
    if (!o.p.empty() || !o.p_grid.empty()) throw InvalidInput("--p and --p-grid apply to --class only");
    WeightedGraph g = load_graph(o.graph_path);
    if (!o.h.empty()) {
      for (std::size_t i = 0; i < g.vertex_count(); ++i) g.set_vertex_weight(i, Probability::zero());
      for (const auto& id : h) g.set_vertex_weight(g.index_of(id), Probability::one());
    }
    return {{std::move(g), ""}};
  }
  auto ps = p_values(o);
  if (ps.empty()) {
    if (need_p) throw InvalidInput("--class needs --p or --p-grid");
    ps.push_back(Probability(1, 2));
  }
  std::vector<Instance> out;
  for (const auto& p : ps) {
    ClassSpec spec = parse_class_spec(o.class_spec, p);
    if (!o.h.empty()) spec.vertical = VerticalSpec::on_subset(h);
    out.push_back({generate(spec), need_p ? p.str() : ""});
  }
  return out;
}

std::pair<std::size_t, std::size_t> pair_of(const WeightedGraph& g, const Options& o) {
  if (o.v.empty() || o.w.empty()) throw InvalidInput("--v and --w are required");
  const std::size_t v = g.index_of(o.v), w = g.index_of(o.w);
  if (v == w) throw InvalidInput("--v and --w must differ");
  return {v, w};
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) s += ',';
    const bool quote = cells[i].find_first_of(",\"") != std::string::npos;
    if (!quote) {
      s += cells[i];
      continue;
    }
    s += '"';
    for (char c : cells[i]) s += c == '"' ? std::string("\"\"") : std::string(1, c);
    s += '"';
  }
  return s + "\n";
}

// Result rows: one JSON object per row, all rows sharing keys for csv/text.
std::string render_rows(const std::vector<ordered_json>& rows, const std::string& format, const ordered_json& doc) {
  if (format == "json") return doc.dump(2) + "\n";
  std::string s;
  if (rows.empty()) return s;
  std::vector<std::string> header;
  for (const auto& [k, _] : rows.front().items()) header.push_back(k);
  auto cell = [](const ordered_json& x) {
    if (x.is_string()) return x.get<std::string>();
    if (x.is_null()) return std::string();
    return x.dump();
  };
  if (format == "csv") {
    s += csv_line(header);
    for (const auto& r : rows) {
      std::vector<std::string> cells;
      for (const auto& k : header) cells.push_back(r.contains(k) ? cell(r[k]) : "");
      s += csv_line(cells);
    }
    return s;
  }
  for (const auto& r : rows) {
    std::string line;
    for (const auto& [k, x] : r.items()) line += (line.empty() ? "" : "  ") + k + "=" + cell(x);
    s += line + "\n";
  }
  return s;
}

std::vector<ordered_json> assertion_rows(const VerificationReport& r, const std::string& p) {
  std::vector<ordered_json> rows;
  for (const auto& a : r.assertions()) {
    ordered_json row;
    row["p"] = p;
    row["assertion"] = a.name;
    row["relation"] = a.relation;
    row["lhs"] = a.lhs;
    row["rhs"] = a.rhs;
    row["passed"] = a.passed;
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Output {
  std::string text;
  int code = kOk;
};

Output cmd_gen(const Options& o) {
  if (!o.graph_path.empty()) throw InvalidInput("gen takes --class, not --graph");
  auto inst = instances(o);
  if (inst.size() != 1) throw InvalidInput("gen takes a single --p");
  const auto doc = graph_to_json(inst.front().graph);
  if (o.format == "json") return {doc.dump(2) + "\n"};
  std::vector<ordered_json> rows;
  for (const auto& e : inst.front().graph.edges())
    rows.push_back({{"u", inst.front().graph.id(e.u)}, {"v", inst.front().graph.id(e.v)}, {"p", e.p.str()}});
  for (std::size_t i = 0; i < inst.front().graph.vertex_count(); ++i)
    rows.push_back({{"u", upper_label(inst.front().graph.id(i))},
                    {"v", lower_label(inst.front().graph.id(i))},
                    {"p", inst.front().graph.vertex_weight(i).str()}});
  return {render_rows(rows, o.format, doc)};
}

Output cmd_exact(const Options& o) {
  std::vector<ordered_json> rows;
  for (const auto& inst : instances(o, false)) {
    const BunkbedGraph b(inst.graph);
    auto [v, w] = pair_of(inst.graph, o);
    std::size_t a, c;
    if (o.event == "lower-lower") a = b.lower(v), c = b.lower(w);
    else if (o.event == "lower-upper") a = b.lower(v), c = b.upper(w);
    else if (o.event == "upper-upper") a = b.upper(v), c = b.upper(w);
    else if (o.event == "upper-lower") a = b.upper(v), c = b.lower(w);
    else throw InvalidInput("--event must be lower-lower, lower-upper, upper-upper or upper-lower");
    const auto model = percolation_model(b);
    const auto r = event_probability(
        model, ConnectivityEvent::connect(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(c)),
        {o.cap, o.workers});
    ordered_json row;
    if (!o.class_spec.empty()) row["p"] = Probability::parse(o.p.empty() ? "1/2" : o.p).str();
    row["event"] = b.doubled().id(a) + " <-> " + b.doubled().id(c);
    row["probability"] = to_string(r.probability);
    row["free_edges"] = free_edge_count(model);
    row["configurations_evaluated"] = r.configurations_evaluated;
    row["elapsed_ms"] = std::chrono::duration<double, std::milli>(r.elapsed).count();
    rows.push_back(std::move(row));
  }
  const ordered_json doc = rows.size() == 1 ? ordered_json(rows.front()) : ordered_json(rows);
  return {render_rows(rows, o.format, doc)};
}

Output cmd_gap(const Options& o) {
  std::vector<ordered_json> rows;
  int code = kOk;
  for (const auto& inst : instances(o)) {
    const BunkbedGraph b(inst.graph);
    auto [v, w] = pair_of(inst.graph, o);
    const auto model = percolation_model(b);
    const ConnectivityEvent events[] = {
        ConnectivityEvent::connect(static_cast<std::uint32_t>(b.lower(v)), static_cast<std::uint32_t>(b.lower(w))),
        ConnectivityEvent::connect(static_cast<std::uint32_t>(b.lower(v)), static_cast<std::uint32_t>(b.upper(w)))};
    const auto r = event_probabilities(model, events, {o.cap, o.workers});
    const Rational gap = r.probabilities[0] - r.probabilities[1];
    if (sgn(gap) < 0) code = kAssertionFailed;
    ordered_json row;
    if (!inst.p.empty()) row["p"] = inst.p;
    row["v"] = o.v;
    row["w"] = o.w;
    row["lower_lower"] = to_string(r.probabilities[0]);
    row["lower_upper"] = to_string(r.probabilities[1]);
    row["gap"] = to_string(gap);
    row["nonnegative"] = sgn(gap) >= 0;
    row["configurations_evaluated"] = r.configurations_evaluated;
    rows.push_back(std::move(row));
  }
  const ordered_json doc = rows.size() == 1 ? ordered_json(rows.front()) : ordered_json(rows);
  return {render_rows(rows, o.format, doc), code};
}

Output cmd_mc(const Options& o) {
  std::vector<ordered_json> rows;
  for (const auto& inst : instances(o)) {
    const BunkbedGraph b(inst.graph);
    auto [v, w] = pair_of(inst.graph, o);
    const auto r = mc_bunkbed_gap(b, v, w, {o.samples, o.seed, o.workers});
    ordered_json row;
    if (!inst.p.empty()) row["p"] = inst.p;
    row["v"] = o.v;
    row["w"] = o.w;
    row["lower_lower"] = format_double(r.lower_lower.estimate);
    row["lower_lower_stderr"] = format_double(r.lower_lower.standard_error);
    row["lower_upper"] = format_double(r.lower_upper.estimate);
    row["lower_upper_stderr"] = format_double(r.lower_upper.standard_error);
    row["gap"] = format_double(r.gap);
    row["paired_stderr"] = format_double(r.paired_standard_error);
    row["unpaired_stderr"] = format_double(r.unpaired_standard_error);
    row["flagged_4sigma"] = r.flagged(4.0);
    row["samples"] = o.samples;
    row["seed"] = o.seed;
    rows.push_back(std::move(row));
  }
  const ordered_json doc = rows.size() == 1 ? ordered_json(rows.front()) : ordered_json(rows);
  return {render_rows(rows, o.format, doc)};
}

Output cmd_poly(const Options& o) {
  if (!o.p.empty()) throw InvalidInput("poly is symbolic in p; use --p-grid to evaluate");
  Options base = o;
  base.p_grid.clear();
  auto inst = instances(base, false);
  const WeightedGraph& g = inst.front().graph;
  auto [v, w] = pair_of(g, o);
  const EngineOptions eo{std::min<std::size_t>(o.cap, kPolynomialCap), o.workers};
  RationalPolynomial poly;
  if (o.h.empty()) {
    poly = gap_polynomial(g, v, w, eo);
  } else {
    std::vector<std::size_t> h;
    for (const auto& id : split_list(o.h)) h.push_back(g.index_of(id));
    poly = gap_polynomial(g, v, w, h, eo);
  }
  const auto verdict = nonneg_on_unit_interval(poly);
  ordered_json doc;
  doc["v"] = o.v;
  doc["w"] = o.w;
  if (!o.h.empty()) doc["H"] = split_list(o.h);
  doc["coefficients"] = to_json(poly);
  doc["polynomial"] = poly.str();
  doc["verdict"] = to_string(verdict.kind);
  if (verdict.witness) doc["witness"] = to_string(*verdict.witness);
  doc["roots_in_interior"] = verdict.roots_in_interior;
  std::vector<ordered_json> rows;
  for (const auto& p : split_list(o.p_grid)) {
    const auto q = Probability::parse(p);
    rows.push_back({{"p", q.str()}, {"gap", to_string(poly(q.value()))}});
  }
  if (!rows.empty()) doc["values"] = rows;
  const int code = verdict.kind == NonnegVerdict::Kind::negative_at ? kAssertionFailed : kOk;
  if (o.format == "json") return {doc.dump(2) + "\n", code};
  std::vector<ordered_json> coeff_rows;
  const auto coeffs = to_json(poly);
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    coeff_rows.push_back({{"degree", k}, {"coefficient", coeffs[k]}});
  if (o.format == "text")
    return {poly.str() + "\nverdict=" + to_string(verdict.kind) +
                (verdict.witness ? " witness=" + to_string(*verdict.witness) : std::string()) + "\n",
            code};
  return {render_rows(coeff_rows, o.format, doc), code};
}

Output cmd_verify(const Options& o, bool thm1) {
  std::vector<ordered_json> docs;
  std::vector<ordered_json> rows;
  std::string text;
  bool passed = true;
  for (const auto& inst : instances(o)) {
    auto [v, w] = pair_of(inst.graph, o);
    const EngineOptions eo{o.cap, o.workers};
    VerificationReport r = thm1 ? (o.weak ? weak_thm1_condition(inst.graph, v, w, eo)
                                          : verify_thm1_decomposition(inst.graph, v, w, eo))
                                : verify_thm2_decomposition(inst.graph, v, w, eo);
    passed = passed && r.passed();
    ordered_json doc = r.to_json();
    if (!inst.p.empty()) doc["p"] = inst.p;
    docs.push_back(std::move(doc));
    for (auto& row : assertion_rows(r, inst.p)) rows.push_back(std::move(row));
    text += (inst.p.empty() ? "" : "p=" + inst.p + "\n") + r.to_text();
  }
  const int code = passed ? kOk : kAssertionFailed;
  if (o.format == "text") return {text, code};
  const ordered_json doc = docs.size() == 1 ? docs.front() : ordered_json(docs);
  return {render_rows(rows, o.format, doc), code};
}

Output render_search(const SearchReport& r, const std::string& format) {
  const int code = r.violations.empty() ? kOk : kAssertionFailed;
  if (format == "json") return {r.to_json().dump(2) + "\n", code};
  if (format == "csv") return {r.to_csv(), code};
  std::ostringstream s;
  s << "mode=" << r.mode << " instances=" << r.instances_checked << " checks=" << r.checks
    << " violations=" << r.violations.size() << " mc_flags=" << r.mc_flags << " cleared=" << r.flags_cleared
    << " unresolved=" << r.flags_unresolved << "\n";
  if (r.min_gap)
    s << "min_gap=" << (r.min_gap->exact.empty() ? format_double(r.min_gap->value) : r.min_gap->exact) << " at "
      << r.min_gap->instance << " (" << r.min_gap->v << "," << r.min_gap->w << ")\n";
  for (const auto& c : r.classes)
    s << c.name << ": instances=" << c.instances << " checks=" << c.checks << " thm1=" << c.thm1
      << " thm2=" << c.thm2 << " uncovered=" << c.uncovered << " exact=" << c.exact << " mc=" << c.mc
      << " skipped=" << c.skipped << "\n";
  for (const auto& v : r.violations)
    s << "VIOLATION " << v.instance << " (" << v.v << "," << v.w << ") gap=" << v.gap << "\n";
  return {s.str(), code};
}

Output cmd_check_class(const Options& o, bool samples_set) {
  if (!o.graph_path.empty() || o.class_spec.empty()) throw InvalidInput("check-class needs --class");
  nlohmann::json doc{{"mode", "class-sweep"}, {"classes", {o.class_spec}},   {"pairs", o.pairs},
                     {"engine", o.engine},    {"vertical", o.vertical},      {"seed", o.seed},
                     {"cap", o.cap},          {"workers", std::max(o.workers, 0)}};
  if (!o.p.empty() || !o.p_grid.empty()) {
    std::vector<std::string> grid;
    for (const auto& p : p_values(o)) grid.push_back(p.str());
    doc["p_grid"] = grid;
  }
  if (samples_set) doc["samples"] = o.samples;
  const SearchConfig c = search_config_from_json(doc);
  return render_search(verify_class(c.classes, c), o.format);
}

Output cmd_search(const Options& o, bool samples_set, bool seed_set, bool workers_set, bool cap_set) {
  if (o.config_path.empty()) throw InvalidInput("search needs --config");
  std::ifstream in(o.config_path);
  if (!in) throw InvalidInput("cannot open config file '" + o.config_path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(o.config_path + ": " + e.what());
  }
  SearchConfig c = search_config_from_json(doc);
  if (samples_set) c.samples = o.samples;
  if (seed_set) c.seed = o.seed;
  if (workers_set) c.workers = o.workers;
  if (cap_set) c.cap = o.cap;
  return render_search(run_search(c), o.format);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bunkbed percolation toolkit", "bunkbed"};
  app.require_subcommand(1);
  Options o;

  auto add_input = [&](CLI::App* sub, bool pair) {
    auto* g = sub->add_option("--graph", o.graph_path, "graph JSON file");
    auto* c = sub->add_option("--class", o.class_spec, "graph class, e.g. complete:4");
    g->excludes(c);
    if (pair) {
      sub->add_option("--v", o.v, "first vertex id");
      sub->add_option("--w", o.w, "second vertex id");
    }
    sub->add_option("--p", o.p, "edge probability (rational or decimal)");
    sub->add_option("--p-grid", o.p_grid, "comma-separated probabilities");
    sub->add_option("--H", o.h, "comma-separated vertices with open verticals (others closed)");
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--out", o.out_path, "write output to FILE");
  };
  auto add_engine = [&](CLI::App* sub) {
    sub->add_option("--cap", o.cap, "maximum free edges for exact enumeration");
    sub->add_option("--workers", o.workers, "threads (0 = all available)");
  };
  auto add_mc = [&](CLI::App* sub) {
    sub->add_option("--samples", o.samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Monte Carlo seed");
  };

  auto* gen = app.add_subcommand("gen", "emit a generated graph as JSON");
  add_input(gen, false);
  add_output(gen);
  auto* exact = app.add_subcommand("exact", "exact connection probability");
  add_input(exact, true);
  exact->add_option("--event", o.event, "lower-lower, lower-upper, upper-upper or upper-lower");
  add_engine(exact);
  add_output(exact);
  auto* gap = app.add_subcommand("gap", "exact bunkbed gap P(v- <-> w-) - P(v- <-> w+)");
  add_input(gap, true);
  add_engine(gap);
  add_output(gap);
  auto* mc = app.add_subcommand("mc", "Monte Carlo estimate of the gap");
  add_input(mc, true);
  add_mc(mc);
  mc->add_option("--workers", o.workers, "threads (0 = all available)");
  add_output(mc);
  auto* poly = app.add_subcommand("poly", "gap polynomial in p and its sign on [0,1]");
  add_input(poly, true);
  add_engine(poly);
  add_output(poly);
  auto* thm1 = app.add_subcommand("verify-thm1", "check the local-symmetry argument on an instance");
  add_input(thm1, true);
  thm1->add_flag("--weak", o.weak, "check the weaker transfer condition instead");
  add_engine(thm1);
  add_output(thm1);
  auto* thm2 = app.add_subcommand("verify-thm2", "check the same-neighbourhood argument on an instance");
  add_input(thm2, true);
  add_engine(thm2);
  add_output(thm2);
  auto* check = app.add_subcommand("check-class", "sweep all pairs of a class over a p grid");
  add_input(check, false);
  check->add_option("--pairs", o.pairs, "all, same-side or cross-side")
      ->check(CLI::IsMember({"all", "same-side", "cross-side"}));
  check->add_option("--engine", o.engine, "auto, exact or mc")->check(CLI::IsMember({"auto", "exact", "mc"}));
  check->add_option("--vertical", o.vertical, "constant or subsets")->check(CLI::IsMember({"constant", "subsets"}));
  add_mc(check);
  add_engine(check);
  add_output(check);
  auto* search = app.add_subcommand("search", "run the search harness from a JSON config");
  search->add_option("--config", o.config_path, "search config JSON")->required();
  add_mc(search);
  add_engine(search);
  add_output(search);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  Output result;
  try {
    if (gen->parsed()) result = cmd_gen(o);
    else if (exact->parsed()) result = cmd_exact(o);
    else if (gap->parsed()) result = cmd_gap(o);
    else if (mc->parsed()) result = cmd_mc(o);
    else if (poly->parsed()) result = cmd_poly(o);
    else if (thm1->parsed()) result = cmd_verify(o, true);
    else if (thm2->parsed()) result = cmd_verify(o, false);
    else if (check->parsed()) result = cmd_check_class(o, check->count("--samples") > 0);
    else if (search->parsed())
      result = cmd_search(o, search->count("--samples") > 0, search->count("--seed") > 0,
                          search->count("--workers") > 0, search->count("--cap") > 0);
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const HypothesisFailure& e) {
    err << "error: hypothesis does not hold: " << e.what() << "\n";
    return kUsageError;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const SymmetryViolation& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  if (!o.out_path.empty()) {
    std::ofstream file(o.out_path);
    if (!file) {
      err << "error: cannot write '" << o.out_path << "'\n";
      return kUsageError;
    }
    file << result.text;
  } else {
    out << result.text;
  }
  return result.code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace bunkbed::cli
