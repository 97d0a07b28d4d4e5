#pragma once

#include "gymtrack/cascade.hpp"
#include "gymtrack/config.hpp"
#include "gymtrack/target.hpp"

#include <map>
#include <span>
#include <vector>

namespace gymtrack {

struct PipelineStats {
  int tracklets_2d = 0;
  int windows = 0;
  int segments = 0;
  int clusters = 0;
  int triangulated_clusters = 0;
  int plane_clusters = 0;
  int plane_fused = 0;
  int gated_out = 0;
  int link_conflicts = 0;
  int tracks_3d = 0;
};

struct PipelineOutput {
  std::map<int, Tracklet3D> tracks;  // every stitched identity, with top/bottom
  std::vector<WindowSnapshot> windows;
  TargetTrack target;                // gap-filled, smoothed
  std::vector<TargetRecord> records;
  PipelineStats stats;
};

/// Window starts on the global grid {k * step} that cover [first, last].
std::vector<int> window_starts(int first_frame, int last_frame, const WindowParams& params);

/// Single-view tracking, per-window cross-view association and cascaded 3D
/// generation, cross-window stitching, then target identification.
PipelineOutput run_pipeline(std::span<const Detection> detections, const Rig& rig,
                            const PipelineConfig& config);

}  // namespace gymtrack
