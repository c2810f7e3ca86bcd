#include <benchmark/benchmark.h>

#include <numbers>

#include "ucw/classical.hpp"
#include "ucw/functional.hpp"
#include "ucw/lp.hpp"
#include "ucw/quantum.hpp"
#include "ucw/relaxation.hpp"

using namespace ucw;

namespace {

void BM_BornBehavior(benchmark::State& state) {
  const QuantumStrategy s = swapping_strategy(std::numbers::pi / 8);
  for (auto _ : state) benchmark::DoNotOptimize(born_behavior(s));
}
BENCHMARK(BM_BornBehavior);

void BM_EvaluateF(benchmark::State& state) {
  const FunctionalSpec spec = builtin("F");
  const QuantumStrategy s = swapping_strategy(std::numbers::pi / 8);
  const Behavior p = born_behavior(s);
  const DoData d = born_do_data(s);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(spec, p, d).value);
}
BENCHMARK(BM_EvaluateF);

void BM_EvaluateModel(benchmark::State& state) {
  const FunctionalSpec spec = builtin("I");
  const ClassicalModel m = sample_random_model(1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_model(spec, m));
}
BENCHMARK(BM_EvaluateModel);

void BM_RootRelaxationLP(benchmark::State& state) {
  const Relaxation r = relax_node(builtin(state.range(0) == 0 ? "I" : "F"), RelaxationNode{});
  for (auto _ : state) benchmark::DoNotOptimize(solve_lp(r.lp).value);
}
BENCHMARK(BM_RootRelaxationLP)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SolveNode(benchmark::State& state) {
  const FunctionalSpec spec = builtin(state.range(0) == 0 ? "I" : "F");
  for (auto _ : state) benchmark::DoNotOptimize(solve_node(spec, RelaxationNode{}).upper_bound);
}
BENCHMARK(BM_SolveNode)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
