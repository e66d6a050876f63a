#include <benchmark/benchmark.h>

#include "sidekick/alns.hpp"
#include "sidekick/construct.hpp"
#include "sidekick/drone_scheduler.hpp"
#include "sidekick/local_search.hpp"
#include "sidekick/policy.hpp"
#include "sidekick/simulator.hpp"

using namespace sidekick;

namespace {

struct Fixture {
  Instance inst;
  TravelMatrices mats;
  Tour nn;
  Tour tour;
  Solution greedy;

  explicit Fixture(int n)
      : inst(generate_uniform_instance(n, 1)),
        mats(inst),
        nn(nearest_neighbor(inst, mats)),
        tour(local_search(nn, mats)),
        greedy(greedy_assign(tour, mats, inst)) {}
};

void BM_Simulate(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(f.greedy, f.mats, f.inst).makespan);
  }
}
BENCHMARK(BM_Simulate)->Arg(20)->Arg(50)->Arg(100);

void BM_LocalSearch(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(local_search(f.nn, f.mats));
  }
}
BENCHMARK(BM_LocalSearch)->Arg(20)->Arg(50)->Arg(100);

void BM_GreedyAssign(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(greedy_assign(f.tour, f.mats, f.inst));
  }
}
BENCHMARK(BM_GreedyAssign)->Arg(20)->Arg(50);

void BM_BeamSchedule(benchmark::State& state) {
  const Fixture f(50);
  const auto width = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(beam_schedule(f.tour, f.mats, f.inst, width));
  }
}
BENCHMARK(BM_BeamSchedule)->Arg(1)->Arg(4)->Arg(16);

void BM_Alns(benchmark::State& state) {
  const Fixture f(50);
  ALNSParams p;
  p.iterations = static_cast<int>(state.range(0));
  for (auto _ : state) {
    Rng rng(7);
    benchmark::DoNotOptimize(alns_run(f.nn, f.mats, p, rng));
  }
}
BENCHMARK(BM_Alns)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_BestOfK(benchmark::State& state) {
  const Fixture f(50);
  PolicyParams policy;
  policy.theta = {-2.0, 0.0, 1.5, 2.0, 0.0, -1.0, -0.5};
  for (auto _ : state) {
    benchmark::DoNotOptimize(best_of_k_decode(f.tour, f.mats, f.inst, policy, 32, 3));
  }
}
BENCHMARK(BM_BestOfK)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
