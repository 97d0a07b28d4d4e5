#include "fixtures.hpp"

namespace fixture {

using namespace gymtrack;

Rig desk_rig() {
  RigParams p;
  p.azimuth_offset_deg = 45.0;
  return make_rig(p);
}

DistanceMatrix random_linkage_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 12);
  DistanceMatrix D(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = u(rng);
      if (r < 0.2) {
        D.set(i, j, CrossViewDistance::empty());
      } else if (r < 0.3) {
        D.set(i, j, CrossViewDistance::infinite());
      } else {
        D.set(i, j, CrossViewDistance::finite(0.05 * grid(rng)));
      }
    }
  }
  return D;
}

WindowSegment2D project_segment(const Rig& rig, int camera, int track_id, int start,
                                const std::function<Point3(int)>& path, double noise_px,
                                std::mt19937_64* rng) {
  std::normal_distribution<double> noise(0.0, noise_px);
  const CameraModel& cam = rig.camera(camera);
  WindowSegment2D seg;
  seg.window_start = start;
  seg.camera = camera;
  seg.track_id = track_id;
  for (int f = start; f <= start + 10; ++f) {
    const Point3 X = path(f);
    Bbox b = person_box(cam, X, X + Vector3(0, 0, 0.85), X - Vector3(0, 0, 0.85));
    if (noise_px > 0.0 && rng != nullptr) {
      b.x += noise(*rng);
      b.y += noise(*rng);
    }
    seg.boxes[f] = b;
    seg.observed.insert(f);
  }
  return seg;
}

Tracklet3D make_track(int id, int first, int last, const std::function<Point3(int)>& path) {
  Tracklet3D t;
  t.track_id = id;
  for (int f = first; f <= last; ++f) {
    TrackPoint p;
    p.position = path(f);
    t.points.emplace(f, p);
  }
  return t;
}

}  // namespace fixture
