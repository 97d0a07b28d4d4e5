#include "gymtrack/cross_view.hpp"

#include <algorithm>

namespace gymtrack {

std::vector<int> Cluster::cameras() const {
  std::vector<int> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.camera);
  std::sort(out.begin(), out.end());
  return out;
}

double bbox_cross_view_distance(const Rig& rig, int camera_a, const Bbox& a,
                                int camera_b, const Bbox& b) {
  const double to_a = epipolar_point_distance(rig.fundamental(camera_b, camera_a), b.center(),
                                              a.center(), a.scale());
  const double to_b = epipolar_point_distance(rig.fundamental(camera_a, camera_b), a.center(),
                                              b.center(), b.scale());
  return to_a + to_b;
}

CrossViewDistance tracklet_pair_distance(const WindowSegment2D& a, const WindowSegment2D& b,
                                         const Rig& rig) {
  double sum = 0.0;
  int shared = 0;
  for (const auto& [frame, box_a] : a.boxes) {
    const auto it = b.boxes.find(frame);
    if (it == b.boxes.end()) continue;
    ++shared;
    if (a.camera != b.camera) {
      sum += bbox_cross_view_distance(rig, a.camera, box_a, b.camera, it->second);
    }
  }
  if (shared == 0) return CrossViewDistance::empty();
  if (a.camera == b.camera) return CrossViewDistance::infinite();
  return CrossViewDistance::finite(sum / shared);
}

DistanceMatrix segment_distance_matrix(std::span<const WindowSegment2D> segments, const Rig& rig) {
  DistanceMatrix D(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    for (std::size_t j = i + 1; j < segments.size(); ++j) {
      D.set(i, j, tracklet_pair_distance(segments[i], segments[j], rig));
    }
  }
  return D;
}

std::vector<Cluster> cluster_segments(std::span<const WindowSegment2D> segments, const Rig& rig,
                                      double lambda) {
  const auto groups = cluster_complete_linkage(segment_distance_matrix(segments, rig), lambda);
  std::vector<Cluster> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    Cluster c;
    for (std::size_t idx : g) c.members.push_back(segments[idx]);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace gymtrack
