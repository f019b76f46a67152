// Serial reference vs the parallel enumeration kernel, and Monte Carlo scaling.

#include <benchmark/benchmark.h>

#include "bunkbed/exact.hpp"
#include "bunkbed/generators.hpp"
#include "bunkbed/mc.hpp"
#include "bunkbed/polynomial.hpp"

using namespace bunkbed;

namespace {

BunkbedGraph instance(const char* spec) { return BunkbedGraph(generate(parse_class_spec(spec, Probability(1, 2)))); }

void BM_ReferenceK4(benchmark::State& state) {
  const auto b = instance("complete:4");
  const auto m = percolation_model(b);
  const auto events = pair_events(b, 0, 1);
  for (auto _ : state) benchmark::DoNotOptimize(reference_event_probabilities(m, events));
}
BENCHMARK(BM_ReferenceK4)->Unit(benchmark::kMillisecond);

void BM_ExactK4(benchmark::State& state) {
  const auto b = instance("complete:4");
  const auto m = percolation_model(b);
  const auto events = pair_events(b, 0, 1);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(event_probabilities(m, events, {30, workers}));
}
BENCHMARK(BM_ExactK4)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ExactK23(benchmark::State& state) {
  const auto b = instance("complete_bipartite:2,3");
  const auto m = percolation_model(b);
  const auto events = pair_events(b, 0, 1);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(event_probabilities(m, events, {30, workers}));
}
BENCHMARK(BM_ExactK23)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_ExactK5(benchmark::State& state) {
  const auto b = instance("complete:5");
  const auto m = percolation_model(b);
  const auto events = pair_events(b, 0, 1);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(event_probabilities(m, events, {30, workers}));
}
BENCHMARK(BM_ExactK5)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_GapPolynomialK4(benchmark::State& state) {
  const auto g = generate(parse_class_spec("complete:4", Probability(1, 2)));
  for (auto _ : state) benchmark::DoNotOptimize(gap_polynomial(g, 0, 1));
}
BENCHMARK(BM_GapPolynomialK4)->Unit(benchmark::kMillisecond);

void BM_McGapK5(benchmark::State& state) {
  const auto b = instance("complete:5");
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(mc_bunkbed_gap(b, 0, 1, {200000, 1, workers}));
  state.SetItemsProcessed(state.iterations() * 200000);
}
BENCHMARK(BM_McGapK5)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
