// gymtrack: simulate, track and evaluate multi-view target tracking runs.

#include "gymtrack/eval.hpp"
#include "gymtrack/io.hpp"
#include "gymtrack/pipeline.hpp"
#include "gymtrack/sim.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace gymtrack;

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kInputError = 3, kEvalError = 4, kInternal = 1 };

struct Overrides {
  std::optional<std::string> mode;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("gymtrack");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TRACK_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void apply(PipelineConfig& cfg, const Overrides& o) {
  if (o.mode) {
    const auto mode = cascade_mode_from_string(*o.mode);
    if (!mode) throw ConfigError("--mode must be cascade, triangulation_only or plane_only");
    cfg.cascade.mode = *mode;
  }
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
}

void simulate(const fs::path& scenario_path, const fs::path& out, const Overrides& o) {
  auto file = read_scenario(scenario_path);
  if (o.seed) file.scenario.seed = *o.seed;
  const auto rendered = render_detections(file.scenario);
  write_detections(out / "detections.jsonl", rendered.detections);
  write_truth(out / "truth.jsonl", rendered.truth);
  write_calib(out / "calib.json", rendered.rig);
  write_routine(out / "routine.json", file.routine);
  spdlog::info("simulated {} frames, {} detections", file.scenario.frames, rendered.detections.size());
}

PipelineOutput track(const fs::path& detections, const fs::path& calib, const PipelineConfig& cfg,
                     const fs::path& out) {
  const Rig rig = read_calib(calib);
  const auto dets = read_detections(detections);
  for (const auto& d : dets) {
    if (!rig.contains(d.camera)) {
      throw InputFormatError("detection at frame " + std::to_string(d.frame) +
                             " references camera " + std::to_string(d.camera) +
                             " missing from the calibration");
    }
  }
  auto result = run_pipeline(dets, rig, cfg);
  write_target_records(out / "tracklets.jsonl", result.records);
  write_tracks(out / "tracks.jsonl", result.tracks);
  return result;
}

EvalReport evaluate_files(const fs::path& tracklets, const fs::path& truth,
                          const std::optional<PipelineConfig>& cfg, const fs::path& out,
                          const EvalOptions& options) {
  const auto records = read_target_records(tracklets);
  const auto gt = read_truth(truth);
  std::optional<std::string> config_json;
  EvalOptions opts = options;
  if (cfg) {
    config_json = routine_to_json(*cfg);
    opts.window = cfg->window.length;
  }
  const auto report = evaluate(records, gt, opts);
  write_report(out / "report.json", report, config_json);
  return report;
}

void print_summary(const EvalReport& r, const fs::path& out) {
  std::cout << "id_switches " << r.id_switches << "\n"
            << "aed_m " << r.aed_m << "\n"
            << "failure_rate " << r.failure_rate << "\n"
            << "coverage " << r.coverage << "\n"
            << "report " << (out / "report.json").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  CLI::App app{"Multi-view target tracking with cascaded data association"};
  app.require_subcommand(1);

  Overrides overrides;
  fs::path out = ".";
  std::string config;
  std::string mode;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out, "Output directory")->default_str(".");
  };
  auto add_tracking = [&](CLI::App* sub) {
    sub->add_option("--mode", mode, "cascade | triangulation_only | plane_only");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  };

  auto* sim = app.add_subcommand("simulate", "Render a scenario into detections, truth and calibration");
  std::string scenario;
  sim->add_option("scenario", scenario, "Scenario JSON")->required();
  sim->add_option("--seed", seed, "Override the scenario seed");
  add_common(sim);

  auto* trk = app.add_subcommand("track", "Run the tracker on a detection stream");
  std::string detections;
  std::string calib;
  trk->add_option("--detections", detections, "detections.jsonl")->required();
  trk->add_option("--calib", calib, "calib.json")->required();
  trk->add_option("--config", config, "Routine config (routine.json)")->required();
  add_tracking(trk);
  add_common(trk);

  auto* evl = app.add_subcommand("evaluate", "Score target tracklets against ground truth");
  std::string tracklets;
  std::string truth;
  std::optional<int> from;
  std::optional<int> to;
  evl->add_option("--tracklets", tracklets, "tracklets.jsonl")->required();
  evl->add_option("--truth", truth, "truth.jsonl")->required();
  evl->add_option("--config", config, "Routine config to embed in the report");
  evl->add_option("--from", from, "First evaluated frame");
  evl->add_option("--to", to, "Last evaluated frame");
  add_common(evl);

  auto* run = app.add_subcommand("run", "simulate, track and evaluate in one go");
  run->add_option("scenario", scenario, "Scenario JSON")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--config", config, "Routine config replacing the scenario's");
  add_tracking(run);
  add_common(run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  for (auto* sub : {sim, trk, run}) {
    if (!sub->parsed()) continue;
    // Not every subcommand has every override.
    auto given = [&](const char* name) {
      const auto* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--mode")) overrides.mode = mode;
    if (given("--seed")) overrides.seed = seed;
    if (given("--threads")) overrides.threads = threads;
  }

  try {
    if (sim->parsed()) {
      simulate(scenario, out, overrides);
    } else if (trk->parsed()) {
      auto cfg = read_routine(config);
      apply(cfg, overrides);
      track(detections, calib, cfg, out);
    } else if (evl->parsed()) {
      EvalOptions opts;
      opts.from = from;
      opts.to = to;
      std::optional<PipelineConfig> cfg;
      if (!config.empty()) cfg = read_routine(config);
      const auto report = evaluate_files(tracklets, truth, cfg, out, opts);
      print_summary(report, out);
    } else if (run->parsed()) {
      simulate(scenario, out, overrides);
      const fs::path routine = config.empty() ? out / "routine.json" : fs::path(config);
      auto cfg = read_routine(routine);
      apply(cfg, overrides);
      track(out / "detections.jsonl", out / "calib.json", cfg, out);
      const auto report = evaluate_files(out / "tracklets.jsonl", out / "truth.jsonl", cfg, out, {});
      print_summary(report, out);
    }
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return kConfigError;
  } catch (const InputFormatError& e) {
    spdlog::error("input format error: {}", e.what());
    return kInputError;
  } catch (const EvalError& e) {
    spdlog::error("evaluation error: {}", e.what());
    return kEvalError;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kInternal;
  }
  return kOk;
}
