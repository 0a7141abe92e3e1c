#include <benchmark/benchmark.h>

#include "flowtest/generators.hpp"

using namespace flowtest;

static void BM_StackStep(benchmark::State& state) {
  Lattice lat = Lattice::two_point();
  Rng rng(7);
  StackGen gen{&lat, true, GenStrategy{GenKind::BY_EXEC}};
  SState s = gen_stack_state(rng, gen, StartSet::INIT);
  SRuleSet rules{&lat, SMutant::CORRECT};
  for (auto _ : state) {
    auto t = run_trace(rules, s, 50);
    benchmark::DoNotOptimize(t.states.size());
  }
}
BENCHMARK(BM_StackStep);

static void BM_StackGenPair(benchmark::State& state) {
  Lattice lat = Lattice::two_point();
  Rng rng(7);
  StackGen gen{&lat, true, GenStrategy{GenKind::BY_EXEC}};
  Relation rel{RelKind::MEM, lat.bottom()};
  for (auto _ : state) {
    auto v = gen_pair(rng, gen, StartSet::INIT, rel);
    benchmark::DoNotOptimize(v.left.mem.size());
  }
}
BENCHMARK(BM_StackGenPair);

static void BM_RegisterGenPair(benchmark::State& state) {
  Lattice lat = Lattice::diamond();
  Rng rng(7);
  RegisterGen gen{&lat, GenStrategy{GenKind::BY_EXEC}};
  Relation rel{RelKind::FULL_WS, lat.bottom()};
  for (auto _ : state) {
    auto v = gen_pair(rng, gen, StartSet::ANY, rel);
    benchmark::DoNotOptimize(v.left.rf.size());
  }
}
BENCHMARK(BM_RegisterGenPair);

BENCHMARK_MAIN();
