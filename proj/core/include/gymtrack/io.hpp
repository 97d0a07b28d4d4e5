#pragma once

#include "gymtrack/config.hpp"
#include "gymtrack/eval.hpp"
#include "gymtrack/pipeline.hpp"
#include "gymtrack/sim.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gymtrack {

/// Malformed or unreadable data file (detections, truth, tracklets).
class InputFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<Detection> read_detections(const std::filesystem::path& path);
void write_detections(const std::filesystem::path& path, std::span<const Detection> detections);

/// Camera list [{id, K[9], R[9], t[3]}], matrices row-major. Problems raise
/// ConfigError.
Rig read_calib(const std::filesystem::path& path);
void write_calib(const std::filesystem::path& path, const Rig& rig);

/// Routine config. Only plane and perf_space are required. Problems raise
/// ConfigError; a non-vertical plane is accepted with a warning.
PipelineConfig read_routine(const std::filesystem::path& path);
PipelineConfig parse_routine(const std::string& json_text);
void write_routine(const std::filesystem::path& path, const PipelineConfig& config);
std::string routine_to_json(const PipelineConfig& config);

struct ScenarioFile {
  Scenario scenario;
  PipelineConfig routine;  // plane and space from the scenario plus its "routine" overrides
};

/// Problems raise ConfigError.
ScenarioFile read_scenario(const std::filesystem::path& path);
ScenarioFile parse_scenario(const std::string& json_text);

void write_truth(const std::filesystem::path& path, std::span<const TruthFrame> truth);
std::vector<TruthFrame> read_truth(const std::filesystem::path& path);

void write_target_records(const std::filesystem::path& path, std::span<const TargetRecord> records);
std::vector<TargetRecord> read_target_records(const std::filesystem::path& path);

/// One line per (track, frame) of every stitched identity.
void write_tracks(const std::filesystem::path& path, const std::map<int, Tracklet3D>& tracks);

/// `config_json` is embedded verbatim when given.
std::string report_to_json(const EvalReport& report, const std::optional<std::string>& config_json);
void write_report(const std::filesystem::path& path, const EvalReport& report,
                  const std::optional<std::string>& config_json);

}  // namespace gymtrack
