#include "gymtrack/cascade.hpp"

#include <algorithm>
#include <set>

namespace gymtrack {

const char* to_string(CascadeMode mode) {
  switch (mode) {
    case CascadeMode::Cascade: return "cascade";
    case CascadeMode::TriangulationOnly: return "triangulation_only";
    case CascadeMode::PlaneOnly: return "plane_only";
  }
  return "unknown";
}

std::optional<CascadeMode> cascade_mode_from_string(std::string_view s) {
  if (s == "cascade") return CascadeMode::Cascade;
  if (s == "triangulation_only") return CascadeMode::TriangulationOnly;
  if (s == "plane_only") return CascadeMode::PlaneOnly;
  return std::nullopt;
}

std::optional<double> median_ray_angle_deg(const WindowSegment2D& a, const WindowSegment2D& b,
                                           const Rig& rig) {
  const CameraModel& ca = rig.camera(a.camera);
  const CameraModel& cb = rig.camera(b.camera);
  std::vector<double> angles;
  for (const auto& [frame, box_a] : a.boxes) {
    const auto it = b.boxes.find(frame);
    if (it == b.boxes.end()) continue;
    angles.push_back(ray_angle_deg(ca, box_a.center(), cb, it->second.center()));
  }
  if (angles.empty()) return std::nullopt;
  const auto mid = angles.begin() + static_cast<std::ptrdiff_t>(angles.size() / 2);
  std::nth_element(angles.begin(), mid, angles.end());
  if (angles.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(angles.begin(), mid);
  return 0.5 * (lower + upper);
}

ClusterRoute classify_cluster(const Cluster& cluster, const Rig& rig, const CascadeParams& params) {
  if (cluster.members.size() <= 1) return ClusterRoute::Insufficient;
  if (cluster.members.size() > 2) return ClusterRoute::Sufficient;

  const auto& a = cluster.members[0];
  const auto& b = cluster.members[1];
  if (!params.opposite_pairs.empty()) {
    const auto lo = std::min(a.camera, b.camera);
    const auto hi = std::max(a.camera, b.camera);
    for (const auto& [p, q] : params.opposite_pairs) {
      if (std::min(p, q) == lo && std::max(p, q) == hi) return ClusterRoute::Insufficient;
    }
    return ClusterRoute::Sufficient;
  }
  const auto angle = median_ray_angle_deg(a, b, rig);
  if (!angle) return ClusterRoute::Insufficient;
  return *angle > params.theta_opp_deg ? ClusterRoute::Insufficient : ClusterRoute::Sufficient;
}

Tracklet3D triangulate_cluster(const Cluster& cluster, const Rig& rig) {
  Tracklet3D out;
  std::set<int> frames;
  for (const auto& m : cluster.members) {
    for (const auto& [frame, box] : m.boxes) frames.insert(frame);
    auto& dst = out.boxes[m.camera];
    dst.insert(m.boxes.begin(), m.boxes.end());
    out.view_links[m.camera] = m.track_id;
  }

  std::vector<Observation> obs;
  for (int frame : frames) {
    obs.clear();
    TrackPoint point;
    point.observed = false;
    for (const auto& m : cluster.members) {
      const auto it = m.boxes.find(frame);
      if (it == m.boxes.end()) continue;
      obs.push_back({rig.camera(m.camera), it->second.center()});
      point.views.push_back(m.camera);
      point.observed = point.observed || m.observed_at(frame);
    }
    if (obs.size() < 2) continue;
    try {
      point.position = triangulate(obs);
    } catch (const GeometryError&) {
      continue;
    }
    std::sort(point.views.begin(), point.views.end());
    point.provenance = Provenance::Triangulated;
    out.points.emplace(frame, std::move(point));
  }
  return out;
}

bool passes_outlier_gate(const Tracklet3D& t, const TrackingSpace& space, double nu) {
  const Cuboid track = space.track();
  const TrackPoint* prev = nullptr;
  int prev_frame = 0;
  for (const auto& [frame, p] : t.points) {
    if (!track.contains(p.position)) return false;
    if (prev != nullptr && frame == prev_frame + 1 &&
        (p.position - prev->position).norm() > nu) {
      return false;
    }
    prev = &p;
    prev_frame = frame;
  }
  return true;
}

std::vector<Tracklet3D> plane_candidates(std::span<const WindowSegment2D> segments,
                                         const PlaneSpec& plane, const Rig& rig) {
  std::vector<Tracklet3D> out;
  out.reserve(segments.size());
  for (const auto& seg : segments) {
    const CameraModel& cam = rig.camera(seg.camera);
    Tracklet3D cand;
    cand.boxes[seg.camera] = seg.boxes;
    cand.view_links[seg.camera] = seg.track_id;
    for (const auto& [frame, box] : seg.boxes) {
      TrackPoint p;
      try {
        p.position = ray_plane_intersect(cam, box.center(), plane);
      } catch (const GeometryError&) {
        continue;
      }
      p.provenance = Provenance::PlaneIntersected;
      p.views = {seg.camera};
      p.observed = seg.observed_at(frame);
      cand.points.emplace(frame, std::move(p));
    }
    out.push_back(std::move(cand));
  }
  return out;
}

CrossViewDistance candidate_distance(const Tracklet3D& a, const Tracklet3D& b) {
  double sum = 0.0;
  int shared = 0;
  for (const auto& [frame, pa] : a.points) {
    const auto it = b.points.find(frame);
    if (it == b.points.end()) continue;
    ++shared;
    sum += (pa.position - it->second.position).norm();
  }
  if (shared == 0) return CrossViewDistance::empty();
  for (const auto& [camera, id] : a.view_links) {
    if (b.view_links.contains(camera)) return CrossViewDistance::infinite();
  }
  return CrossViewDistance::finite(sum / shared);
}

std::vector<Tracklet3D> plane_match_and_fuse(std::span<const Tracklet3D> candidates, double tau) {
  DistanceMatrix D(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      D.set(i, j, candidate_distance(candidates[i], candidates[j]));

  std::vector<Tracklet3D> fused;
  for (const auto& group : cluster_complete_linkage(D, tau)) {
    std::set<int> cameras;
    for (std::size_t idx : group)
      for (const auto& [camera, id] : candidates[idx].view_links) cameras.insert(camera);
    if (cameras.size() < 2) continue;

    Tracklet3D out;
    std::map<int, std::vector<const TrackPoint*>> per_frame;
    for (std::size_t idx : group) {
      const auto& c = candidates[idx];
      for (const auto& [frame, p] : c.points) per_frame[frame].push_back(&p);
      for (const auto& [camera, boxes] : c.boxes) out.boxes[camera].insert(boxes.begin(), boxes.end());
      for (const auto& [camera, id] : c.view_links) out.view_links[camera] = id;
    }
    for (const auto& [frame, pts] : per_frame) {
      TrackPoint p;
      p.position = Point3::Zero();
      p.observed = false;
      for (const TrackPoint* q : pts) {
        p.position += q->position;
        p.views.insert(p.views.end(), q->views.begin(), q->views.end());
        p.observed = p.observed || q->observed;
      }
      p.position /= static_cast<double>(pts.size());
      std::sort(p.views.begin(), p.views.end());
      p.provenance = Provenance::PlaneIntersected;
      out.points.emplace(frame, std::move(p));
    }
    fused.push_back(std::move(out));
  }
  return fused;
}

WindowResult process_window(int window_start, std::span<const WindowSegment2D> segments,
                            const WindowContext& ctx) {
  WindowResult result;
  result.window_start = window_start;

  const auto clusters = cluster_segments(segments, ctx.rig, ctx.lambda);
  result.clusters = static_cast<int>(clusters.size());

  std::vector<WindowSegment2D> unmatched;
  auto keep = [&](Tracklet3D t) {
    if (t.empty()) return;
    if (!passes_outlier_gate(t, ctx.space, ctx.cascade.nu)) {
      ++result.gated_out;
      return;
    }
    t.track_id = static_cast<int>(result.fragments.size());
    result.fragments.push_back(std::move(t));
  };

  for (const auto& cluster : clusters) {
    bool to_plane = false;
    switch (ctx.cascade.mode) {
      case CascadeMode::Cascade:
        to_plane = classify_cluster(cluster, ctx.rig, ctx.cascade) == ClusterRoute::Insufficient;
        break;
      case CascadeMode::TriangulationOnly:
        if (cluster.members.size() < 2) {
          ++result.discarded_clusters;
          continue;
        }
        break;
      case CascadeMode::PlaneOnly:
        to_plane = true;
        break;
    }
    if (to_plane) {
      ++result.plane_clusters;
      unmatched.insert(unmatched.end(), cluster.members.begin(), cluster.members.end());
    } else {
      ++result.triangulated_clusters;
      keep(triangulate_cluster(cluster, ctx.rig));
    }
  }

  if (!unmatched.empty()) {
    const auto candidates = plane_candidates(unmatched, ctx.plane, ctx.rig);
    auto fused = plane_match_and_fuse(candidates, ctx.cascade.tau);
    result.plane_fused = static_cast<int>(fused.size());
    for (auto& t : fused) keep(std::move(t));
  }
  return result;
}

}  // namespace gymtrack
