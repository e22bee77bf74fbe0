// Serial reference against the OpenMP version of each parallel kernel.
// Argument: number of honest reviewers in the synthetic store.

#include <benchmark/benchmark.h>

#include <map>
#include <memory>

#include "collusion/indicators.hpp"
#include "collusion/ingest.hpp"
#include "collusion/mining.hpp"
#include "collusion/synth.hpp"

using namespace collusion;

namespace {

const RatingGraph& store(std::size_t reviewers) {
  static std::map<std::size_t, std::unique_ptr<RatingGraph>> cache;
  auto& slot = cache[reviewers];
  if (!slot) {
    synth::AttackScript a;
    a.group_size = 6;
    a.target_count = 5;
    a.time_span_days = 3;
    const std::vector<synth::AttackScript> attacks(4, a);
    synth::GeneratorOptions opts;
    opts.honest_reviewers = reviewers;
    opts.products = 80;
    opts.density = 0.12;
    auto ds = synth::generate(opts, attacks, 7);
    slot = std::make_unique<RatingGraph>(build_graph(std::move(ds.raw), {1, 1, 5.0}));
  }
  return *slot;
}

template <auto Mine>
void BM_mine(benchmark::State& state) {
  const auto& g = store(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Mine(g, 2, 3, kDefaultCandidateCap));
}

template <auto Build>
void BM_suspiciousness(benchmark::State& state) {
  const auto& g = store(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Build(g));
}

template <auto Score>
void BM_score(benchmark::State& state) {
  const auto& g = store(static_cast<std::size_t>(state.range(0)));
  const auto candidates = enumerate_candidates(g, 2, 3);
  const auto table = build_suspiciousness(g);
  const auto cohort = CohortMaxima::of(candidates);
  const DetectionConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(Score(candidates, table, cohort, config));
  state.counters["groups"] = static_cast<double>(candidates.size());
}

}  // namespace

BENCHMARK(BM_mine<enumerate_candidates_serial>)->Name("mine/serial")->Arg(200)->Arg(800);
BENCHMARK(BM_mine<enumerate_candidates>)->Name("mine/omp")->Arg(200)->Arg(800);
BENCHMARK(BM_suspiciousness<build_suspiciousness_serial>)->Name("suspiciousness/serial")->Arg(200)->Arg(800);
BENCHMARK(BM_suspiciousness<build_suspiciousness>)->Name("suspiciousness/omp")->Arg(200)->Arg(800);
BENCHMARK(BM_score<score_groups_serial>)->Name("score/serial")->Arg(200)->Arg(800);
BENCHMARK(BM_score<score_groups>)->Name("score/omp")->Arg(200)->Arg(800);

BENCHMARK_MAIN();
