#pragma once

#include "gymtrack/assignment.hpp"
#include "gymtrack/cascade.hpp"
#include "gymtrack/tracklet.hpp"

#include <map>
#include <set>
#include <span>
#include <vector>

namespace gymtrack {

/// Mean per-frame distance over the frames both fragments hold;
/// unavailable when they share none.
CostMatrix window_distance_matrix(std::span<const Tracklet3D> prev, std::span<const Tracklet3D> next);

/// Fuses an assigned pair across the overlap that starts at `overlap_start`
/// and lasts `half` frames. Before the overlap `prev` is kept, inside it the
/// two are averaged, from `overlap_start + half` on `next` is kept. A frame
/// held by one side only keeps that side's value. The result carries
/// prev.track_id; next's 2D links replace prev's for shared cameras.
Tracklet3D merge_assigned(const Tracklet3D& prev, const Tracklet3D& next, int overlap_start,
                          int half);

/// Monotone id source; ids are never handed out twice.
class TrackIdAllocator {
 public:
  int next() { return next_++; }
  std::vector<int> allocate(std::size_t count);
  int peek() const noexcept { return next_; }

 private:
  int next_ = 0;
};

struct StitchParams {
  int step = 5;  // omega / 2
  double unmatched_threshold = 0.6;
};

/// Sequential registry of global 3D tracks built from per-window fragments.
/// Only fragments of directly adjacent windows are matched.
class TrackStitcher {
 public:
  explicit TrackStitcher(StitchParams params = {}) : params_(params) {}

  /// Adds the fragments of the next window. Windows must arrive in order of
  /// increasing start. Returns the global id of each fragment.
  std::vector<int> push(const WindowResult& window);

  /// Ids that received a fragment from the most recent window.
  const std::set<int>& alive() const noexcept { return alive_; }
  const std::map<int, Tracklet3D>& tracks() const noexcept { return tracks_; }
  int conflicts() const noexcept { return conflicts_; }

 private:
  StitchParams params_;
  TrackIdAllocator ids_;
  std::map<int, Tracklet3D> tracks_;
  std::vector<Tracklet3D> last_fragments_;  // track_id holds the global id
  std::optional<int> last_start_;
  std::set<int> alive_;
  int conflicts_ = 0;
};

}  // namespace gymtrack
