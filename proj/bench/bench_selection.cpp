#include <benchmark/benchmark.h>

#include "qhelly/helly.hpp"
#include "qhelly/instance.hpp"
#include "qhelly/parallel.hpp"

using namespace qhelly;

namespace {

ColorClasses fixture(std::size_t members) {
  GeneratorSpec s;
  s.kind = GeneratorKind::CommonBall;
  s.seed = 1;
  s.members_per_class = members;
  return generate(s).color_classes();
}

ExecutionOptions exec_for(int threads) {
  ExecutionOptions exec;
  exec.serial_reference = threads == 0;
  exec.threads = threads == 0 ? 1 : threads;
  return exec;
}

// Argument 0 selects the serial reference kernel.
void BM_VerifyHypothesis(benchmark::State& state) {
  const ColorClasses classes = fixture(3);
  const ExecutionOptions exec = exec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(verify_colorful_hypothesis(classes, 4, 1.0, {}, exec));
  }
}
BENCHMARK(BM_VerifyHypothesis)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_LowestOverSelections(benchmark::State& state) {
  const ColorClasses classes = fixture(2);
  const auto selections = colorful_selections(classes, classes.size());
  const ExecutionOptions exec = exec_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto slots = evaluate<double>(
        selections, [&](const ColorfulSelection& s) { return lowest_ellipsoid(s.intersection(classes), 1.0).objective; },
        exec);
    benchmark::DoNotOptimize(collect(std::move(slots)));
  }
}
BENCHMARK(BM_LowestOverSelections)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
