#pragma once

#include "gymtrack/cross_view.hpp"
#include "gymtrack/geometry.hpp"
#include "gymtrack/linkage.hpp"
#include "gymtrack/tracklet.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace gymtrack {

enum class ClusterRoute { Sufficient, Insufficient };

/// Which 3D generators a window may use: both (cascade), triangulation
/// only, or ray-plane intersection only.
enum class CascadeMode { Cascade, TriangulationOnly, PlaneOnly };

const char* to_string(CascadeMode mode);
std::optional<CascadeMode> cascade_mode_from_string(std::string_view s);

struct CascadeParams {
  CascadeMode mode = CascadeMode::Cascade;
  double theta_opp_deg = 150.0;
  /// When non-empty, a two-view cluster is opposite iff its camera pair is
  /// listed here; the ray-angle test is skipped.
  std::vector<std::pair<int, int>> opposite_pairs;
  double tau = 0.5;
  double nu = 1.0;
};

/// Median over shared valid frames of the angle between the two viewing
/// rays of the box centers. nullopt when the segments share no frame.
std::optional<double> median_ray_angle_deg(const WindowSegment2D& a, const WindowSegment2D& b,
                                           const Rig& rig);

/// A cluster is insufficient when it holds one segment, or two segments from
/// opposite views.
ClusterRoute classify_cluster(const Cluster& cluster, const Rig& rig, const CascadeParams& params);

/// Per frame, triangulates the box centers of every member valid at that
/// frame. Frames with fewer than two views, or degenerate geometry, are
/// skipped.
Tracklet3D triangulate_cluster(const Cluster& cluster, const Rig& rig);

/// False when any point leaves the tracking cuboid or any frame-to-frame
/// step exceeds nu meters.
bool passes_outlier_gate(const Tracklet3D& t, const TrackingSpace& space, double nu = 1.0);

/// One single-view candidate per segment, from intersecting each box
/// center's ray with the plane.
std::vector<Tracklet3D> plane_candidates(std::span<const WindowSegment2D> segments,
                                         const PlaneSpec& plane, const Rig& rig);

/// Mean per-frame Euclidean distance over shared frames; empty when none
/// are shared, infinite when both candidates share a camera.
CrossViewDistance candidate_distance(const Tracklet3D& a, const Tracklet3D& b);

/// Clusters candidates at cutoff tau and averages each multi-camera cluster
/// per frame over the members present. Single-camera clusters are dropped.
std::vector<Tracklet3D> plane_match_and_fuse(std::span<const Tracklet3D> candidates,
                                             double tau = 0.5);

struct WindowResult {
  int window_start = 0;
  std::vector<Tracklet3D> fragments;
  int clusters = 0;
  int triangulated_clusters = 0;
  int plane_clusters = 0;
  int discarded_clusters = 0;
  int plane_fused = 0;
  int gated_out = 0;
};

struct WindowContext {
  const Rig& rig;
  const PlaneSpec& plane;
  const TrackingSpace& space;
  const CascadeParams& cascade;
  double lambda = 0.3;
};

/// Cross-view clustering followed by the cascaded 3D generation of one
/// window. Fragment track ids are local indices.
WindowResult process_window(int window_start, std::span<const WindowSegment2D> segments,
                            const WindowContext& ctx);

}  // namespace gymtrack
