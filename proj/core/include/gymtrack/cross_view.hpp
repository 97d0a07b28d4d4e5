#pragma once

#include "gymtrack/geometry.hpp"
#include "gymtrack/linkage.hpp"
#include "gymtrack/sv_track.hpp"

#include <span>
#include <vector>

namespace gymtrack {

/// Segments of one window believed to show the same person; at most one
/// per camera.
struct Cluster {
  std::vector<WindowSegment2D> members;

  std::vector<int> cameras() const;
};

/// Symmetric epipolar distance between two boxes seen by different cameras:
/// each center's distance to the other center's epipolar line, normalized by
/// that box's |w + h|, summed over both directions.
double bbox_cross_view_distance(const Rig& rig, int camera_a, const Bbox& a,
                                int camera_b, const Bbox& b);

/// Mean of the box distance over shared valid frames; empty when no frame is
/// shared, infinite for two segments of one camera that share frames.
CrossViewDistance tracklet_pair_distance(const WindowSegment2D& a, const WindowSegment2D& b,
                                         const Rig& rig);

DistanceMatrix segment_distance_matrix(std::span<const WindowSegment2D> segments, const Rig& rig);

std::vector<Cluster> cluster_segments(std::span<const WindowSegment2D> segments, const Rig& rig,
                                      double lambda = 0.3);

}  // namespace gymtrack
