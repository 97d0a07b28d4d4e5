#pragma once

#include "gymtrack/geometry.hpp"
#include "gymtrack/sv_track.hpp"
#include "gymtrack/tracklet.hpp"

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace gymtrack {

struct TargetCriteria {
  double h_top = 1.5;  // meters
  double h_bot = 0.5;
  int delta = 30;      // frames
  double occupancy = 0.5;

  void validate() const;
};

struct TargetParams {
  TargetCriteria criteria;
  int max_gap = 7;          // longest bridged loss, frames
  int smooth_window = 5;
  double alpha = 1.3;       // box buffer factor
  double attach_radius = 0.5;  // fraction of max(w, h)
};

struct TopBottom {
  Point3 top;
  Point3 bottom;
};

/// Triangulates the top-center and bottom-center pixels of one frame's
/// boxes. nullopt with fewer than two views or degenerate rays.
std::optional<TopBottom> top_bottom_3d(const std::map<int, Bbox>& boxes_by_camera, const Rig& rig);

/// Fills t.top and t.bottom for every frame of t.points with two or more
/// linked boxes.
void annotate_top_bottom(Tracklet3D& t, const Rig& rig);

/// Frames in [end_frame - delta + 1, end_frame] where the center lies in the
/// performance space and top and bottom clear their trigger heights.
int trigger_count(const Tracklet3D& t, const TrackingSpace& space, const TargetCriteria& crit,
                  int end_frame);

/// Strictly more than occupancy * delta qualifying frames.
bool identify_target(const Tracklet3D& t, const TrackingSpace& space, const TargetCriteria& crit,
                     int end_frame);

/// Stitcher state after one window: its last frame and the ids it extended.
struct WindowSnapshot {
  int window_end = 0;
  std::set<int> alive;
};

struct TargetEvent {
  enum class Kind { Identified, Lost };
  Kind kind;
  int frame;  // window end at which the event was decided
  int track_id;
};

/// The target's gap-filled 3D timeline. `ids` maps every frame of
/// track.points to the global track it came from.
struct TargetTrack {
  Tracklet3D track;
  std::map<int, int> ids;
  std::vector<TargetEvent> events;
};

/// Replays the window stream: keeps the identified target while its track is
/// extended, re-identifies on loss and bridges losses up to max_gap frames by
/// linear interpolation. `tracks` must already carry top/bottom positions.
TargetTrack maintain_target(const std::map<int, Tracklet3D>& tracks,
                            std::span<const WindowSnapshot> windows, const TrackingSpace& space,
                            const TargetParams& params);

/// Centered moving average over each run of consecutive frames; near the
/// ends of a run the window shrinks symmetrically.
Tracklet3D smooth_track(const Tracklet3D& t, int window = 5);

/// Square box with the same center and side alpha * max(w, h).
Bbox buffer_bbox(const Bbox& b, double alpha = 1.3);

struct ViewBox {
  int camera = 0;
  Bbox box;
  bool buffered = false;
};

struct TargetRecord {
  int frame = 0;
  int track_id = 0;
  Point3 X = Point3::Zero();
  Provenance provenance = Provenance::Triangulated;
  std::vector<ViewBox> per_view;
};

/// Projects the (smoothed) target into every camera. The box linked to the
/// source track is kept when its center lies within attach_radius * max(w, h)
/// of the projection; otherwise a box of the last known size for that camera
/// is synthesized. Each camera yields the refined box and its buffered square.
std::vector<TargetRecord> reproject_target_2d(const TargetTrack& target,
                                              const std::map<int, Tracklet3D>& tracks,
                                              const Rig& rig, const TargetParams& params);

}  // namespace gymtrack
