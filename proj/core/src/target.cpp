#include "gymtrack/target.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <stdexcept>

namespace gymtrack {

void TargetCriteria::validate() const {
  if (!(h_top >= h_bot) || !(h_bot >= 0.0)) {
    throw std::invalid_argument("target criteria: need h_top >= h_bot >= 0");
  }
  if (delta < 1) throw std::invalid_argument("target criteria: delta must be >= 1");
  if (!(occupancy >= 0.0 && occupancy <= 1.0)) {
    throw std::invalid_argument("target criteria: occupancy must lie in [0, 1]");
  }
}

std::optional<TopBottom> top_bottom_3d(const std::map<int, Bbox>& boxes_by_camera, const Rig& rig) {
  if (boxes_by_camera.size() < 2) return std::nullopt;
  std::vector<Observation> top;
  std::vector<Observation> bottom;
  for (const auto& [camera, box] : boxes_by_camera) {
    const CameraModel& cam = rig.camera(camera);
    top.push_back({cam, box.top_center()});
    bottom.push_back({cam, box.bottom_center()});
  }
  try {
    return TopBottom{triangulate(top), triangulate(bottom)};
  } catch (const GeometryError&) {
    return std::nullopt;
  }
}

void annotate_top_bottom(Tracklet3D& t, const Rig& rig) {
  t.top.clear();
  t.bottom.clear();
  for (const auto& [frame, p] : t.points) {
    if (const auto tb = top_bottom_3d(t.boxes_at(frame), rig)) {
      t.top.emplace(frame, tb->top);
      t.bottom.emplace(frame, tb->bottom);
    }
  }
}

int trigger_count(const Tracklet3D& t, const TrackingSpace& space, const TargetCriteria& crit,
                  int end_frame) {
  int count = 0;
  for (auto it = t.points.lower_bound(end_frame - crit.delta + 1);
       it != t.points.end() && it->first <= end_frame; ++it) {
    const auto top = t.top.find(it->first);
    const auto bottom = t.bottom.find(it->first);
    if (top == t.top.end() || bottom == t.bottom.end()) continue;
    if (space.in_perf(it->second.position) && top->second.z() > crit.h_top &&
        bottom->second.z() > crit.h_bot) {
      ++count;
    }
  }
  return count;
}

bool identify_target(const Tracklet3D& t, const TrackingSpace& space, const TargetCriteria& crit,
                     int end_frame) {
  return trigger_count(t, space, crit, end_frame) > crit.occupancy * crit.delta;
}

namespace {

class TargetBuilder {
 public:
  TargetBuilder(const std::map<int, Tracklet3D>& tracks, int max_gap)
      : tracks_(tracks), max_gap_(max_gap) {}

  /// Copies frames [from, to] of track `id`, bridging short holes.
  void emit(int id, int from, int to) {
    const Tracklet3D& src = tracks_.at(id);
    for (auto it = src.points.lower_bound(from); it != src.points.end() && it->first <= to; ++it) {
      append(id, it->first, it->second);
    }
  }

  std::optional<int> last_frame() const {
    if (out_.track.points.empty()) return std::nullopt;
    return out_.track.last_frame();
  }

  TargetTrack& result() { return out_; }

 private:
  void append(int id, int frame, const TrackPoint& p) {
    if (!out_.track.points.empty()) {
      const auto& [last, prev] = *out_.track.points.rbegin();
      const int gap = frame - last - 1;
      if (gap >= 1 && gap <= max_gap_) {
        for (int f = last + 1; f < frame; ++f) {
          const double s = static_cast<double>(f - last) / (frame - last);
          TrackPoint q;
          q.position = prev.position + s * (p.position - prev.position);
          q.provenance = Provenance::Interpolated;
          q.observed = false;
          out_.track.points.emplace(f, std::move(q));
          out_.ids.emplace(f, id);
        }
      } else if (gap > max_gap_) {
        spdlog::debug("target gap of {} frames before frame {} left open", gap, frame);
      }
    }
    out_.track.points.emplace(frame, p);
    out_.ids.emplace(frame, id);
  }

  const std::map<int, Tracklet3D>& tracks_;
  int max_gap_;
  TargetTrack out_;
};

}  // namespace

TargetTrack maintain_target(const std::map<int, Tracklet3D>& tracks,
                            std::span<const WindowSnapshot> windows, const TrackingSpace& space,
                            const TargetParams& params) {
  params.criteria.validate();
  TargetBuilder builder(tracks, params.max_gap);
  constexpr int kNone = -1;
  int current = kNone;
  int segment_start = 0;
  auto& events = builder.result().events;

  auto close_segment = [&](int id) {
    const auto last = tracks.at(id).last_observed_frame();
    if (last && *last >= segment_start) builder.emit(id, segment_start, *last);
  };

  for (const auto& w : windows) {
    if (current != kNone && !w.alive.contains(current)) {
      close_segment(current);
      events.push_back({TargetEvent::Kind::Lost, w.window_end, current});
      current = kNone;
    }
    if (current != kNone) continue;

    std::optional<int> best;
    int best_count = -1;
    for (int id : w.alive) {
      const auto it = tracks.find(id);
      if (it == tracks.end()) continue;
      const int count = trigger_count(it->second, space, params.criteria, w.window_end);
      if (count > params.criteria.occupancy * params.criteria.delta && count > best_count) {
        best = id;
        best_count = count;
      }
    }
    if (!best) continue;

    const auto first = tracks.at(*best).first_observed_frame();
    if (!first) continue;
    current = *best;
    segment_start = *first;
    if (const auto last = builder.last_frame()) segment_start = std::max(segment_start, *last + 1);
    events.push_back({TargetEvent::Kind::Identified, w.window_end, *best});
  }
  if (current != kNone) close_segment(current);
  return std::move(builder.result());
}

Tracklet3D smooth_track(const Tracklet3D& t, int window) {
  if (window < 1 || window % 2 == 0) {
    throw std::invalid_argument("smooth_track: window must be odd and positive");
  }
  Tracklet3D out = t;
  const int half = window / 2;
  auto it = t.points.begin();
  while (it != t.points.end()) {
    std::vector<std::pair<int, Point3>> run;
    int expected = it->first;
    while (it != t.points.end() && it->first == expected) {
      run.emplace_back(it->first, it->second.position);
      ++it;
      ++expected;
    }
    const int n = static_cast<int>(run.size());
    for (int i = 0; i < n; ++i) {
      const int reach = std::min({half, i, n - 1 - i});
      Point3 sum = Point3::Zero();
      for (int k = i - reach; k <= i + reach; ++k) sum += run[static_cast<std::size_t>(k)].second;
      out.points.at(run[static_cast<std::size_t>(i)].first).position = sum / (2 * reach + 1);
    }
  }
  return out;
}

Bbox buffer_bbox(const Bbox& b, double alpha) {
  const double side = alpha * b.max_side();
  return {b.x, b.y, side, side};
}

std::vector<TargetRecord> reproject_target_2d(const TargetTrack& target,
                                              const std::map<int, Tracklet3D>& tracks,
                                              const Rig& rig, const TargetParams& params) {
  std::vector<TargetRecord> out;
  out.reserve(target.track.points.size());
  std::map<int, Bbox> last_size;
  for (const auto& [frame, p] : target.track.points) {
    TargetRecord rec;
    rec.frame = frame;
    rec.track_id = target.ids.at(frame);
    rec.X = p.position;
    rec.provenance = p.provenance;

    const auto src = tracks.find(rec.track_id);
    for (const auto& cam : rig.cameras()) {
      if (cam.depth(p.position) <= 1e-6) continue;
      const Point2 c = project(cam, p.position);
      std::optional<Bbox> linked;
      if (src != tracks.end() && p.provenance != Provenance::Interpolated) {
        const auto by_cam = src->second.boxes.find(cam.id());
        if (by_cam != src->second.boxes.end()) {
          const auto b = by_cam->second.find(frame);
          if (b != by_cam->second.end() &&
              (b->second.center() - c).norm() <= params.attach_radius * b->second.max_side()) {
            linked = b->second;
          }
        }
      }
      Bbox refined;
      if (linked) {
        refined = {c.x(), c.y(), linked->w, linked->h};
        last_size[cam.id()] = *linked;
      } else {
        const auto known = last_size.find(cam.id());
        if (known == last_size.end()) continue;
        refined = {c.x(), c.y(), known->second.w, known->second.h};
      }
      rec.per_view.push_back({cam.id(), refined, false});
      rec.per_view.push_back({cam.id(), buffer_bbox(refined, params.alpha), true});
    }
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace gymtrack
