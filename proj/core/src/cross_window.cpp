#include "gymtrack/cross_window.hpp"

#include <spdlog/spdlog.h>

#include <stdexcept>

namespace gymtrack {

CostMatrix window_distance_matrix(std::span<const Tracklet3D> prev, std::span<const Tracklet3D> next) {
  CostMatrix D(prev.size(), next.size());
  for (std::size_t i = 0; i < prev.size(); ++i) {
    for (std::size_t j = 0; j < next.size(); ++j) {
      double sum = 0.0;
      int shared = 0;
      for (const auto& [frame, p] : prev[i].points) {
        const auto it = next[j].points.find(frame);
        if (it == next[j].points.end()) continue;
        sum += (p.position - it->second.position).norm();
        ++shared;
      }
      if (shared > 0) D.set(i, j, sum / shared);
    }
  }
  return D;
}

Tracklet3D merge_assigned(const Tracklet3D& prev, const Tracklet3D& next, int overlap_start,
                          int half) {
  const int next_only = overlap_start + half;
  Tracklet3D out;
  out.track_id = prev.track_id;

  for (const auto& [frame, p] : prev.points) {
    if (frame < overlap_start || !next.points.contains(frame)) out.points.emplace(frame, p);
  }
  for (const auto& [frame, q] : next.points) {
    const auto it = prev.points.find(frame);
    if (frame < overlap_start && it != prev.points.end()) continue;
    if (frame >= next_only || it == prev.points.end()) {
      out.points[frame] = q;
      continue;
    }
    TrackPoint m = q;
    m.position = 0.5 * (it->second.position + q.position);
    m.observed = it->second.observed || q.observed;
    std::set<int> views(it->second.views.begin(), it->second.views.end());
    views.insert(q.views.begin(), q.views.end());
    m.views.assign(views.begin(), views.end());
    out.points[frame] = std::move(m);
  }

  out.boxes = prev.boxes;
  for (const auto& [camera, boxes] : next.boxes) {
    auto& dst = out.boxes[camera];
    dst.erase(dst.lower_bound(overlap_start), dst.end());
    dst.insert(boxes.lower_bound(overlap_start), boxes.end());
  }
  out.view_links = prev.view_links;
  for (const auto& [camera, id] : next.view_links) out.view_links[camera] = id;
  return out;
}

std::vector<int> TrackIdAllocator::allocate(std::size_t count) {
  std::vector<int> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(next());
  return out;
}

std::vector<int> TrackStitcher::push(const WindowResult& window) {
  if (last_start_ && window.window_start <= *last_start_) {
    throw std::invalid_argument("TrackStitcher::push: windows out of order");
  }
  const bool adjacent = last_start_ && window.window_start == *last_start_ + params_.step;
  const std::span<const Tracklet3D> prev =
      adjacent ? std::span<const Tracklet3D>(last_fragments_) : std::span<const Tracklet3D>();
  const auto D = window_distance_matrix(prev, window.fragments);
  const auto matching = assign(D, params_.unmatched_threshold);

  std::vector<int> ids(window.fragments.size(), -1);
  for (const auto& [r, c] : matching.pairs) {
    const int id = prev[r].track_id;
    ids[c] = id;
    Tracklet3D& track = tracks_.at(id);
    for (const auto& [camera, link] : window.fragments[c].view_links) {
      const auto it = track.view_links.find(camera);
      if (it != track.view_links.end() && it->second != link) {
        ++conflicts_;
        spdlog::debug("track {}: camera {} relinked from 2D track {} to {}", id, camera,
                      it->second, link);
      }
    }
    track = merge_assigned(track, window.fragments[c], window.window_start, params_.step);
  }
  for (std::size_t c : matching.unmatched_cols) {
    const int id = ids_.next();
    ids[c] = id;
    Tracklet3D t = window.fragments[c];
    t.track_id = id;
    tracks_.emplace(id, std::move(t));
  }

  last_fragments_ = window.fragments;
  alive_.clear();
  for (std::size_t c = 0; c < ids.size(); ++c) {
    last_fragments_[c].track_id = ids[c];
    alive_.insert(ids[c]);
  }
  last_start_ = window.window_start;
  return ids;
}

}  // namespace gymtrack
