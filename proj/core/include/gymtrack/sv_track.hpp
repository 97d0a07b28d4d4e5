#pragma once

#include "gymtrack/geometry.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

namespace gymtrack {

/// Center-parameterized box: (x, y) is the box center in pixels.
struct Bbox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  Point2 center() const { return {x, y}; }
  Point2 top_center() const { return {x, y - 0.5 * h}; }
  Point2 bottom_center() const { return {x, y + 0.5 * h}; }
  double scale() const { return std::abs(w + h); }
  double max_side() const { return std::max(w, h); }

  bool operator==(const Bbox&) const = default;
};

struct Detection {
  int frame = 0;
  int camera = 0;
  Bbox box;
  double confidence = 1.0;
};

struct Tracklet2D {
  int camera = 0;
  int track_id = 0;
  std::map<int, Bbox> boxes;  // frame -> box, possibly sparse

  int first_frame() const { return boxes.begin()->first; }
  int last_frame() const { return boxes.rbegin()->first; }
};

struct WindowParams {
  int length = 10;           // omega; a window spans [start, start + length]
  int step = 5;              // omega / 2
  int min_observed = 5;
  int max_extrapolation = 2;
};

/// One tracklet restricted to a sliding window, with gaps filled.
struct WindowSegment2D {
  int window_start = 0;
  int window_length = 10;
  int camera = 0;
  int track_id = 0;
  std::map<int, Bbox> boxes;  // observed and filled frames (the valid set)
  std::set<int> observed;     // frames backed by a real detection

  bool valid_at(int frame) const { return boxes.contains(frame); }
  bool observed_at(int frame) const { return observed.contains(frame); }
};

double iou(const Bbox& a, const Bbox& b);

struct IouTrackerParams {
  double iou_threshold = 0.1;
  int max_age = 2;
};

/// Greedy IoU tracker for a single camera.
class IouTracker {
 public:
  explicit IouTracker(int camera, IouTrackerParams params = {});

  /// Advance to `frame`. All detections must belong to this camera and frame.
  /// Returns the tracks closed by this step.
  std::vector<Tracklet2D> step(int frame, std::span<const Detection> detections);

  /// Close every live track.
  std::vector<Tracklet2D> flush();

  std::size_t live_count() const { return live_.size(); }
  int camera() const { return camera_; }

 private:
  struct LiveTrack {
    Tracklet2D tracklet;
    int last_frame;
  };

  int camera_;
  IouTrackerParams params_;
  std::vector<LiveTrack> live_;
  int next_id_ = 0;
};

/// Runs one tracker over a whole detection stream of one camera.
std::vector<Tracklet2D> track_camera(int camera, std::span<const Detection> detections,
                                     IouTrackerParams params = {});

/// Restricts `t` to [window_start, window_start + length] and fills missing
/// frames. Returns nullopt when fewer than `min_observed` frames fall inside.
std::optional<WindowSegment2D> extract_segment(const Tracklet2D& t, int window_start,
                                               const WindowParams& params = {});

/// Windows starting at the tracklet's first frame and advancing by `step`
/// until the tracklet span is covered.
std::vector<WindowSegment2D> segment_windows(const Tracklet2D& t,
                                             const WindowParams& params = {});

}  // namespace gymtrack
