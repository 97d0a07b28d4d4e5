#pragma once

// Shared builders for synthetic inputs.

#include "gymtrack/linkage.hpp"
#include "gymtrack/sim.hpp"
#include "gymtrack/sv_track.hpp"
#include "gymtrack/tracklet.hpp"

#include <functional>
#include <random>
#include <vector>

namespace fixture {

/// Desk-scale rig: radius 6 m, height 2 m, focal 1000 px, 45 degree offset.
gymtrack::Rig desk_rig();

/// Random symmetric matrix with finite values on a coarse grid (so ties
/// happen), plus empty and infinite entries.
gymtrack::DistanceMatrix random_linkage_matrix(std::mt19937_64& rng, std::size_t n);

/// Segment of `camera` for window [start, start + 10] holding the projection
/// of path(frame), optionally with Gaussian pixel noise on the center.
gymtrack::WindowSegment2D project_segment(const gymtrack::Rig& rig, int camera, int track_id,
                                          int start, const std::function<gymtrack::Point3(int)>& path,
                                          double noise_px = 0.0, std::mt19937_64* rng = nullptr);

/// Tracklet3D over [first, last] with points path(frame).
gymtrack::Tracklet3D make_track(int id, int first, int last,
                                const std::function<gymtrack::Point3(int)>& path);

}  // namespace fixture
