#include <doctest.h>

#include <cmath>

#include "bunkbed/exact.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/mc.hpp"

using namespace bunkbed;

namespace {
Probability P(const char* s) { return Probability::parse(s); }
WeightedGraph cls(const char* spec, const char* p) { return generate(parse_class_spec(spec, P(p))); }
std::uint32_t u32(std::size_t x) { return static_cast<std::uint32_t>(x); }
}  // namespace

TEST_CASE("thresholds") {
  CHECK(open_threshold(P("0")) == 0);
  CHECK(open_threshold(P("1/2")) == (std::uint64_t{1} << 63));
  CHECK(open_threshold(P("1/4")) == (std::uint64_t{1} << 62));
}

TEST_CASE("degenerate weights") {
  const BunkbedGraph one(cls("complete:3", "1"));
  const auto m1 = percolation_model(one);
  const auto r1 = mc_event_probability(m1, ConnectivityEvent::connect(0, 5), {1000, 3, 0});
  CHECK(r1.estimate == 1);
  CHECK(r1.standard_error == 0);
  const BunkbedGraph zero(cls("complete:3", "0"));
  const auto r0 = mc_event_probability(percolation_model(zero), ConnectivityEvent::connect(0, 1), {1000, 3, 0});
  CHECK(r0.estimate == 0);
  for (const auto* p : {"0", "1"}) {
    const auto g = mc_bunkbed_gap(BunkbedGraph(cls("complete:4", p)), 0, 1, {2000, 5, 0});
    CHECK(g.gap == 0);
  }
}

TEST_CASE("K2 estimates") {
  const BunkbedGraph b(cls("complete:2", "1/2"));
  const auto m = percolation_model(b);
  const auto r = mc_event_probability(m, ConnectivityEvent::connect(u32(b.lower(0)), u32(b.lower(1))), {1000000, 1, 0});
  CHECK(std::abs(r.estimate - 9.0 / 16) <= 4 * r.standard_error);
  CHECK(r.standard_error == doctest::Approx(std::sqrt(r.estimate * (1 - r.estimate) / 1e6)));
  CHECK(r.samples == 1000000);
  CHECK(r.seed == 1);
  const auto g = mc_bunkbed_gap(b, 0, 1, {1000000, 2, 0});
  CHECK(std::abs(g.gap - 0.125) <= 4 * g.paired_standard_error);
  CHECK(g.paired_standard_error <= g.unpaired_standard_error);
  CHECK_FALSE(g.flagged(4));
}

TEST_CASE("K5 gap is not flagged") {
  const auto g = mc_bunkbed_gap(BunkbedGraph(cls("complete:5", "1/2")), 0, 1, {1000000, 9, 0});
  CHECK(g.gap >= -4 * g.paired_standard_error);
}

TEST_CASE("reproducibility across worker counts") {
  const BunkbedGraph b(cls("complete_bipartite:2,3", "1/3"));
  const auto base = mc_bunkbed_gap(b, 0, 2, {50000, 42, 1});
  for (int workers : {2, 3, 8}) {
    const auto again = mc_bunkbed_gap(b, 0, 2, {50000, 42, workers});
    CHECK(again.gap == base.gap);
    CHECK(again.lower_lower.estimate == base.lower_lower.estimate);
    CHECK(again.paired_standard_error == base.paired_standard_error);
  }
  CHECK(mc_bunkbed_gap(b, 0, 2, {50000, 43, 1}).gap != base.gap);
  // non-multiple of the chunk size
  const auto odd1 = mc_bunkbed_gap(b, 0, 2, {kSamplesPerChunk * 3 + 17, 5, 1});
  const auto odd8 = mc_bunkbed_gap(b, 0, 2, {kSamplesPerChunk * 3 + 17, 5, 8});
  CHECK(odd1.gap == odd8.gap);
}

TEST_CASE("batched pair estimates agree with single pairs") {
  const BunkbedGraph b(cls("cycle:5", "1/2"));
  const std::vector<std::pair<std::size_t, std::size_t>> pairs{{0, 1}, {0, 2}, {3, 1}};
  const auto all = mc_bunkbed_gaps(b, pairs, {20000, 8, 0});
  for (std::size_t k = 0; k < pairs.size(); ++k)
    CHECK(all[k].gap == mc_bunkbed_gap(b, pairs[k].first, pairs[k].second, {20000, 8, 0}).gap);
}

TEST_CASE("common random numbers never hurt") {
  for (auto spec : {"complete:3", "complete_bipartite:2,2", "cycle:4", "complete:4"}) {
    const BunkbedGraph b(cls(spec, "1/2"));
    const auto g = mc_bunkbed_gap(b, 0, 1, {100000, 4, 0});
    CHECK(g.paired_standard_error <= g.unpaired_standard_error);
  }
}

TEST_CASE("calibration over seeds") {
  const BunkbedGraph b(cls("complete:2", "1/2"));
  const auto m = percolation_model(b);
  const auto ev = ConnectivityEvent::connect(u32(b.lower(0)), u32(b.lower(1)));
  int inside = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto r = mc_event_probability(m, ev, {20000, seed, 0});
    if (std::abs(r.estimate - 9.0 / 16) <= 2 * r.standard_error) ++inside;
  }
  CHECK(inside >= 90);
}
