#include "gymtrack/sv_track.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

namespace gymtrack {

namespace {

Bbox lerp(const Bbox& a, const Bbox& b, double s) {
  return {a.x + s * (b.x - a.x), a.y + s * (b.y - a.y),
          a.w + s * (b.w - a.w), a.h + s * (b.h - a.h)};
}

constexpr double kMinExtrapolatedSide = 1.0;

}  // namespace

double iou(const Bbox& a, const Bbox& b) {
  const double ix = std::min(a.x + 0.5 * a.w, b.x + 0.5 * b.w) -
                    std::max(a.x - 0.5 * a.w, b.x - 0.5 * b.w);
  const double iy = std::min(a.y + 0.5 * a.h, b.y + 0.5 * b.h) -
                    std::max(a.y - 0.5 * a.h, b.y - 0.5 * b.h);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  const double inter = ix * iy;
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

IouTracker::IouTracker(int camera, IouTrackerParams params)
    : camera_(camera), params_(params) {}

std::vector<Tracklet2D> IouTracker::step(int frame, std::span<const Detection> detections) {
  for (const auto& d : detections) {
    if (d.camera != camera_ || d.frame != frame) {
      throw std::invalid_argument("IouTracker::step: detection from another camera or frame");
    }
  }

  struct Candidate {
    double score;
    int track_id;
    std::size_t track;
    std::size_t detection;
  };
  std::vector<Candidate> candidates;
  for (std::size_t t = 0; t < live_.size(); ++t) {
    const Bbox& last = live_[t].tracklet.boxes.rbegin()->second;
    for (std::size_t d = 0; d < detections.size(); ++d) {
      const double score = iou(last, detections[d].box);
      if (score >= params_.iou_threshold) {
        candidates.push_back({score, live_[t].tracklet.track_id, t, d});
      }
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.score, a.track_id, a.detection) < std::tie(a.score, b.track_id, b.detection);
  });

  std::vector<bool> track_used(live_.size(), false);
  std::vector<bool> detection_used(detections.size(), false);
  for (const auto& c : candidates) {
    if (track_used[c.track] || detection_used[c.detection]) continue;
    track_used[c.track] = true;
    detection_used[c.detection] = true;
    live_[c.track].tracklet.boxes[frame] = detections[c.detection].box;
    live_[c.track].last_frame = frame;
  }

  std::vector<Tracklet2D> closed;
  std::vector<LiveTrack> still_live;
  still_live.reserve(live_.size() + detections.size());
  for (std::size_t t = 0; t < live_.size(); ++t) {
    if (!track_used[t] && frame - live_[t].last_frame > params_.max_age) {
      closed.push_back(std::move(live_[t].tracklet));
    } else {
      still_live.push_back(std::move(live_[t]));
    }
  }
  for (std::size_t d = 0; d < detections.size(); ++d) {
    if (detection_used[d]) continue;
    LiveTrack track{Tracklet2D{camera_, next_id_++, {}}, frame};
    track.tracklet.boxes.emplace(frame, detections[d].box);
    still_live.push_back(std::move(track));
  }
  live_ = std::move(still_live);
  return closed;
}

std::vector<Tracklet2D> IouTracker::flush() {
  std::vector<Tracklet2D> closed;
  closed.reserve(live_.size());
  for (auto& t : live_) closed.push_back(std::move(t.tracklet));
  live_.clear();
  return closed;
}

std::vector<Tracklet2D> track_camera(int camera, std::span<const Detection> detections,
                                     IouTrackerParams params) {
  std::vector<Tracklet2D> out;
  if (detections.empty()) return out;
  std::vector<Detection> sorted(detections.begin(), detections.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Detection& a, const Detection& b) { return a.frame < b.frame; });

  IouTracker tracker(camera, params);
  auto it = sorted.begin();
  for (int frame = sorted.front().frame; frame <= sorted.back().frame; ++frame) {
    auto end = it;
    while (end != sorted.end() && end->frame == frame) ++end;
    auto closed = tracker.step(frame, std::span<const Detection>(&*it, static_cast<std::size_t>(end - it)));
    for (auto& t : closed) out.push_back(std::move(t));
    it = end;
  }
  for (auto& t : tracker.flush()) out.push_back(std::move(t));
  std::sort(out.begin(), out.end(),
            [](const Tracklet2D& a, const Tracklet2D& b) { return a.track_id < b.track_id; });
  return out;
}

std::optional<WindowSegment2D> extract_segment(const Tracklet2D& t, int window_start,
                                               const WindowParams& params) {
  const int window_end = window_start + params.length;
  std::vector<std::pair<int, Bbox>> obs;
  for (auto it = t.boxes.lower_bound(window_start);
       it != t.boxes.end() && it->first <= window_end; ++it) {
    obs.emplace_back(it->first, it->second);
  }
  if (static_cast<int>(obs.size()) < params.min_observed || obs.size() < 2) {
    return std::nullopt;
  }

  WindowSegment2D seg;
  seg.window_start = window_start;
  seg.window_length = params.length;
  seg.camera = t.camera;
  seg.track_id = t.track_id;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    seg.boxes[obs[i].first] = obs[i].second;
    seg.observed.insert(obs[i].first);
    if (i + 1 < obs.size()) {
      const auto& [f0, b0] = obs[i];
      const auto& [f1, b1] = obs[i + 1];
      for (int f = f0 + 1; f < f1; ++f) {
        seg.boxes[f] = lerp(b0, b1, static_cast<double>(f - f0) / (f1 - f0));
      }
    }
  }

  // Constant-velocity extrapolation from the two nearest observed boxes.
  auto extrapolate = [&](const std::pair<int, Bbox>& near, const std::pair<int, Bbox>& far,
                         int frame) {
    const double s = static_cast<double>(frame - near.first) / (near.first - far.first);
    Bbox b = lerp(near.second, far.second, -s);
    b.w = std::max(b.w, kMinExtrapolatedSide);
    b.h = std::max(b.h, kMinExtrapolatedSide);
    return b;
  };
  const int first = obs.front().first;
  const int last = obs.back().first;
  for (int f = std::max(window_start, first - params.max_extrapolation); f < first; ++f) {
    seg.boxes[f] = extrapolate(obs[0], obs[1], f);
  }
  for (int f = last + 1; f <= std::min(window_end, last + params.max_extrapolation); ++f) {
    seg.boxes[f] = extrapolate(obs[obs.size() - 1], obs[obs.size() - 2], f);
  }
  return seg;
}

std::vector<WindowSegment2D> segment_windows(const Tracklet2D& t, const WindowParams& params) {
  if (params.length < 2 || params.length % 2 != 0 || params.step <= 0) {
    throw std::invalid_argument("segment_windows: window length must be even and >= 2");
  }
  std::vector<WindowSegment2D> out;
  if (t.boxes.empty()) return out;
  const int first = t.first_frame();
  const int last = t.last_frame();
  int start = first;
  while (true) {
    if (auto seg = extract_segment(t, start, params)) out.push_back(std::move(*seg));
    if (start + params.length >= last) break;
    start += params.step;
  }
  return out;
}

}  // namespace gymtrack
