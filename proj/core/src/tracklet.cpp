#include "gymtrack/tracklet.hpp"

#include <stdexcept>

namespace gymtrack {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::Triangulated: return "triangulated";
    case Provenance::PlaneIntersected: return "plane_intersected";
    case Provenance::Interpolated: return "interpolated";
  }
  return "unknown";
}

std::optional<Provenance> provenance_from_string(std::string_view s) {
  if (s == "triangulated") return Provenance::Triangulated;
  if (s == "plane_intersected") return Provenance::PlaneIntersected;
  if (s == "interpolated") return Provenance::Interpolated;
  return std::nullopt;
}

std::optional<int> Tracklet3D::first_observed_frame() const {
  for (const auto& [frame, p] : points)
    if (p.observed) return frame;
  return std::nullopt;
}

std::optional<int> Tracklet3D::last_observed_frame() const {
  for (auto it = points.rbegin(); it != points.rend(); ++it)
    if (it->second.observed) return it->first;
  return std::nullopt;
}

std::map<int, Bbox> Tracklet3D::boxes_at(int frame) const {
  std::map<int, Bbox> out;
  for (const auto& [camera, by_frame] : boxes) {
    const auto it = by_frame.find(frame);
    if (it != by_frame.end()) out.emplace(camera, it->second);
  }
  return out;
}

TrackingSpace TrackingSpace::from_bounds(const std::array<double, 6>& b, double beta) {
  TrackingSpace s;
  s.perf.min = Point3(b[0], b[1], b[2]);
  s.perf.max = Point3(b[3], b[4], b[5]);
  s.beta = beta;
  s.validate();
  return s;
}

void TrackingSpace::validate() const {
  if (!(perf.min.array() < perf.max.array()).all()) {
    throw std::invalid_argument("tracking space: min must be below max on every axis");
  }
  if (!(beta >= 0.0)) throw std::invalid_argument("tracking space: beta must be >= 0");
}

Cuboid TrackingSpace::track() const {
  Cuboid c = perf;
  c.min.x() -= beta;
  c.min.y() -= beta;
  c.max.x() += beta;
  c.max.y() += beta;
  return c;
}

}  // namespace gymtrack
