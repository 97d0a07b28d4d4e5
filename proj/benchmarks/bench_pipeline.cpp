#include "gymtrack/io.hpp"
#include "gymtrack/pipeline.hpp"

#include <benchmark/benchmark.h>
#include <spdlog/spdlog.h>

using namespace gymtrack;

namespace {

// Whole pipeline on the crowded scenario; the argument is the thread count.
void BM_Pipeline(benchmark::State& state) {
  spdlog::set_level(spdlog::level::warn);
  const auto file = read_scenario(std::string(GYMTRACK_SCENARIO_DIR) + "/crowded-distractors.json");
  const auto rendered = render_detections(file.scenario);
  auto cfg = file.routine;
  cfg.threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(rendered.detections, rendered.rig, cfg));
  state.counters["frames/s"] = benchmark::Counter(
      static_cast<double>(file.scenario.frames) * static_cast<double>(state.iterations()),
      benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Pipeline)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Render(benchmark::State& state) {
  const auto file = read_scenario(std::string(GYMTRACK_SCENARIO_DIR) + "/clean-4cam.json");
  for (auto _ : state) benchmark::DoNotOptimize(render_detections(file.scenario));
}
BENCHMARK(BM_Render)->Unit(benchmark::kMillisecond);

}  // namespace
