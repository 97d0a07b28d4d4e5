#pragma once

#include "gymtrack/geometry.hpp"
#include "gymtrack/sv_track.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace gymtrack {

enum class Provenance : std::uint8_t { Triangulated, PlaneIntersected, Interpolated };

std::string_view to_string(Provenance p);
std::optional<Provenance> provenance_from_string(std::string_view s);

struct TrackPoint {
  Point3 position = Point3::Zero();
  Provenance provenance = Provenance::Triangulated;
  std::vector<int> views;  // contributing cameras, ascending
  bool observed = true;    // some contributing box was a real detection
};

/// Frame-indexed 3D track with the 2D boxes it was built from.
struct Tracklet3D {
  int track_id = -1;
  std::map<int, TrackPoint> points;
  std::map<int, Point3> top;
  std::map<int, Point3> bottom;
  std::map<int, std::map<int, Bbox>> boxes;  // camera -> frame -> box
  std::map<int, int> view_links;             // camera -> single-view track id

  bool empty() const { return points.empty(); }
  int first_frame() const { return points.begin()->first; }
  int last_frame() const { return points.rbegin()->first; }
  std::optional<int> first_observed_frame() const;
  std::optional<int> last_observed_frame() const;
  /// Boxes of every linked camera at `frame`.
  std::map<int, Bbox> boxes_at(int frame) const;
};

struct Cuboid {
  Point3 min = Point3::Zero();
  Point3 max = Point3::Zero();

  bool contains(const Point3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  Point3 center() const { return 0.5 * (min + max); }
};

/// Performance cuboid plus the laterally buffered tracking cuboid.
struct TrackingSpace {
  Cuboid perf;
  double beta = 1.0;

  static TrackingSpace from_bounds(const std::array<double, 6>& bounds, double beta);
  void validate() const;
  Cuboid track() const;
  bool in_perf(const Point3& p) const { return perf.contains(p); }
  bool in_track(const Point3& p) const { return track().contains(p); }
};

}  // namespace gymtrack
