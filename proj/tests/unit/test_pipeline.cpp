#include "gymtrack/pipeline.hpp"
#include "gymtrack/eval.hpp"
#include "gymtrack/io.hpp"

#include <gtest/gtest.h>

using namespace gymtrack;

namespace {

ScenarioFile short_scenario() {
  return parse_scenario(R"({
    "name": "short", "seed": 3, "frames": 240, "noise_px": 1.0,
    "rig": {"azimuth_offset_deg": 45},
    "plane": {"n": [1, 0, 0], "point": [0, 0, 0]},
    "perf_space": [-1, -3, 0, 1, 3, 3.5],
    "target": {"lateral_period": 120},
    "distractors": [{"region": [1.4, -2.5, 1.9, -1.5], "speed": 0.02}]
  })");
}

}  // namespace

TEST(WindowStarts, GlobalGrid) {
  WindowParams p;
  EXPECT_EQ(window_starts(0, 20, p), (std::vector<int>{0, 5, 10}));
  EXPECT_EQ(window_starts(7, 21, p), (std::vector<int>{5, 10, 15}));
  EXPECT_EQ(window_starts(3, 4, p), (std::vector<int>{0}));
}

TEST(Config, Validation) {
  PipelineConfig c;
  EXPECT_NO_THROW(c.validate());
  c.window.length = 7;
  EXPECT_THROW(c.validate(), ConfigError);
  c = {};
  c.threads = 0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Pipeline, TracksTheJumperEndToEnd) {
  const auto sf = short_scenario();
  const auto r = render_detections(sf.scenario);
  const auto out = run_pipeline(r.detections, r.rig, sf.routine);
  ASSERT_FALSE(out.records.empty());
  const auto report = evaluate(out.records, r.truth);
  EXPECT_EQ(report.id_switches, 0);
  EXPECT_LT(report.aed_m, 0.05);
  EXPECT_GT(report.coverage, 0.9);
  EXPECT_LE(report.failure_rate, 0.01);
  EXPECT_GE(out.stats.tracks_3d, 2);
}

TEST(Pipeline, ThreadCountDoesNotChangeResults) {
  const auto sf = short_scenario();
  const auto r = render_detections(sf.scenario);
  auto cfg = sf.routine;
  const auto one = run_pipeline(r.detections, r.rig, cfg);
  cfg.threads = 3;
  const auto three = run_pipeline(r.detections, r.rig, cfg);
  ASSERT_EQ(one.records.size(), three.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) {
    EXPECT_EQ(one.records[i].X, three.records[i].X);
    EXPECT_EQ(one.records[i].track_id, three.records[i].track_id);
  }
}

TEST(Pipeline, EmptyInput) {
  const auto sf = short_scenario();
  const auto out = run_pipeline({}, make_rig(sf.scenario.rig), sf.routine);
  EXPECT_TRUE(out.records.empty());
  EXPECT_TRUE(out.tracks.empty());
}
