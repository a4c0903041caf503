#include <benchmark/benchmark.h>

#include <filesystem>
#include <string>

#include "conleygp/conley.hpp"
#include "conleygp/morse.hpp"
#include "conleygp/pipeline.hpp"

namespace {

using namespace conleygp;

AnalysisConfig config(const std::string& name) {
  return load_config(std::filesystem::path(CONLEYGP_SOURCE_DIR) / "configs" / (name + ".json"));
}

// Connecting config, seed 0, at resolution B.
AnalysisConfig connecting(int B) {
  AnalysisConfig c = config("connecting");
  c.B = B;
  return c;
}

void BM_Fit(benchmark::State& state) {
  const AnalysisConfig c = config("chaos");
  const TrainingData data = load_data(c);
  for (auto _ : state) benchmark::DoNotOptimize(fit(data, c.kernel));
}
BENCHMARK(BM_Fit)->Unit(benchmark::kMillisecond);

void BM_Assemble(benchmark::State& state) {
  const AnalysisConfig c = connecting(static_cast<int>(state.range(0)));
  const TrainingData data = load_data(c);
  for (auto _ : state) benchmark::DoNotOptimize(build_enclosure(c, data));
}
BENCHMARK(BM_Assemble)->Arg(11)->Arg(13)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_MorseGraph(benchmark::State& state) {
  const Analysis a = run(connecting(static_cast<int>(state.range(0))), {.timings = false});
  for (auto _ : state) benchmark::DoNotOptimize(morse_graph(a.graph));
}
BENCHMARK(BM_MorseGraph)->Arg(11)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_ConleyIndices(benchmark::State& state) {
  const Analysis a = run(connecting(static_cast<int>(state.range(0))), {.timings = false});
  for (auto _ : state) {
    const ChainSelector s = build_selector(a.graph);
    for (std::size_t n = 0; n < a.morse.nodes.size(); ++n)
      benchmark::DoNotOptimize(conley_index(a.morse, a.graph, s, n));
  }
}
BENCHMARK(BM_ConleyIndices)->Arg(11)->Arg(15)->Unit(benchmark::kMillisecond);

void BM_Run(benchmark::State& state) {
  const AnalysisConfig c = connecting(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run(c, {.timings = false}));
}
BENCHMARK(BM_Run)->Arg(11)->Arg(15)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
