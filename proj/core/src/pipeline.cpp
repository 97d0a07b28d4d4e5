#include "gymtrack/pipeline.hpp"

#include "gymtrack/parallel.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <stdexcept>

namespace gymtrack {

namespace {

int floor_to(int v, int step) {
  const int q = v / step;
  return (v % step != 0 && v < 0 ? q - 1 : q) * step;
}

}  // namespace

std::vector<int> window_starts(int first_frame, int last_frame, const WindowParams& params) {
  std::vector<int> starts;
  if (last_frame < first_frame) return starts;
  const int first = floor_to(first_frame, params.step);
  const int last = std::max(first, floor_to(last_frame - params.length + params.step - 1, params.step));
  for (int s = first; s <= last; s += params.step) starts.push_back(s);
  return starts;
}

PipelineOutput run_pipeline(std::span<const Detection> detections, const Rig& rig,
                            const PipelineConfig& config) {
  config.validate();
  PipelineOutput out;
  if (detections.empty()) return out;

  std::map<int, std::vector<Detection>> by_camera;
  for (const auto& d : detections) {
    if (!rig.contains(d.camera)) {
      throw std::invalid_argument("detection references unknown camera " + std::to_string(d.camera));
    }
    by_camera[d.camera].push_back(d);
  }

  std::vector<int> cameras;
  for (const auto& [camera, dets] : by_camera) cameras.push_back(camera);
  std::vector<std::vector<Tracklet2D>> per_camera(cameras.size());
  parallel_for(cameras.size(), config.threads, [&](std::size_t i) {
    per_camera[i] = track_camera(cameras[i], by_camera.at(cameras[i]), config.iou);
  });
  std::vector<Tracklet2D> tracklets;
  for (auto& list : per_camera)
    for (auto& t : list) tracklets.push_back(std::move(t));
  out.stats.tracklets_2d = static_cast<int>(tracklets.size());

  int first = detections.front().frame;
  int last = first;
  for (const auto& d : detections) {
    first = std::min(first, d.frame);
    last = std::max(last, d.frame);
  }
  const auto starts = window_starts(first, last, config.window);
  out.stats.windows = static_cast<int>(starts.size());

  const WindowContext ctx{rig, config.plane, config.space, config.cascade, config.lambda};
  std::vector<WindowResult> results(starts.size());
  std::vector<int> segment_counts(starts.size(), 0);
  parallel_for(starts.size(), config.threads, [&](std::size_t w) {
    const int s = starts[w];
    std::vector<WindowSegment2D> segments;
    for (const auto& t : tracklets) {
      if (t.last_frame() < s || t.first_frame() > s + config.window.length) continue;
      if (auto seg = extract_segment(t, s, config.window)) segments.push_back(std::move(*seg));
    }
    segment_counts[w] = static_cast<int>(segments.size());
    results[w] = process_window(s, segments, ctx);
  });

  TrackStitcher stitcher(config.stitch);
  for (std::size_t w = 0; w < results.size(); ++w) {
    const auto& r = results[w];
    out.stats.segments += segment_counts[w];
    out.stats.clusters += r.clusters;
    out.stats.triangulated_clusters += r.triangulated_clusters;
    out.stats.plane_clusters += r.plane_clusters;
    out.stats.plane_fused += r.plane_fused;
    out.stats.gated_out += r.gated_out;
    stitcher.push(r);
    out.windows.push_back({r.window_start + config.window.length, stitcher.alive()});
  }
  out.stats.link_conflicts = stitcher.conflicts();

  out.tracks = stitcher.tracks();
  std::vector<Tracklet3D*> slots;
  for (auto& [id, t] : out.tracks) slots.push_back(&t);
  parallel_for(slots.size(), config.threads,
               [&](std::size_t i) { annotate_top_bottom(*slots[i], rig); });
  out.stats.tracks_3d = static_cast<int>(out.tracks.size());

  out.target = maintain_target(out.tracks, out.windows, config.space, config.target);
  out.target.track = smooth_track(out.target.track, config.target.smooth_window);
  out.records = reproject_target_2d(out.target, out.tracks, rig, config.target);
  spdlog::info("pipeline: {} 2D tracklets, {} windows, {} 3D tracks, {} target frames",
               out.stats.tracklets_2d, out.stats.windows, out.stats.tracks_3d, out.records.size());
  return out;
}

}  // namespace gymtrack
