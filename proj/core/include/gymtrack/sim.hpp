#pragma once

#include "gymtrack/geometry.hpp"
#include "gymtrack/sv_track.hpp"
#include "gymtrack/tracklet.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gymtrack {

struct RigParams {
  double radius = 6.0;
  double height = 2.0;
  double focal = 1000.0;
  int image_width = 1920;
  int image_height = 1080;
  double azimuth_offset_deg = 0.0;
  Point3 aim{0.0, 0.0, 1.5};
};

/// Four cameras at 90 degree spacing on a horizontal circle around the aim
/// point, all looking at it. Cameras (0, 2) and (1, 3) face each other.
Rig make_rig(const RigParams& params);

/// Stateless normal draws addressed by (seed, stream, index). Used so that a
/// sample does not depend on evaluation order.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t bits(std::uint64_t stream, std::uint64_t index) const;
  double uniform(std::uint64_t stream, std::uint64_t index) const;  // in (0, 1)
  double normal(std::uint64_t stream, std::uint64_t index) const;

 private:
  std::uint64_t seed_;
};

enum class TrajectoryKind { OnPlaneJump, OffPlaneWalk };

struct OffPlaneInterval {
  int from = 0;
  int to = 0;
  double offset = 0.0;  // peak distance from the plane, meters
};

struct PersonSpec {
  TrajectoryKind kind = TrajectoryKind::OnPlaneJump;
  double body_height = 1.7;
  // on_plane_jump
  double base_height = 1.6;  // center height between jumps
  double lateral_amplitude = 1.5;
  int lateral_period = 240;
  double jump_min = 0.3;
  double jump_max = 1.0;
  int rest_min = 15;
  int rest_max = 40;
  std::vector<OffPlaneInterval> off_plane;
  // off_plane_walk: waypoints drawn in [x0, y0, x1, y1]
  std::array<double, 4> region{1.5, -3.0, 2.0, 3.0};
  double walk_height = 1.0;
  double speed = 0.03;  // meters per frame
};

struct Trajectory {
  std::vector<Point3> center;
  std::vector<bool> on_plane;
  double body_height = 1.7;

  Point3 top(std::size_t i) const { return center[i] + Vector3(0.0, 0.0, 0.5 * body_height); }
  Point3 bottom(std::size_t i) const { return center[i] - Vector3(0.0, 0.0, 0.5 * body_height); }
};

/// Jumping target moving laterally inside a vertical plane, or a distractor
/// walking between random waypoints at constant height.
Trajectory synth_trajectory(const PersonSpec& spec, int frames, std::uint64_t seed,
                            const PlaneSpec& plane);

struct DropoutRule {
  std::vector<int> cameras;
  int from = 0;
  int to = 0;                 // inclusive
  std::optional<int> person;  // all persons when unset
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  int frames = 300;
  double noise_px = 0.0;
  RigParams rig;
  PlaneSpec plane;
  TrackingSpace space;
  PersonSpec target;
  std::vector<PersonSpec> distractors;
  std::vector<DropoutRule> dropout;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;
  bool dropped(int frame, int camera, int person) const;
};

struct TruthView {
  int camera = 0;
  Bbox box;
  bool visible = false;   // projects in front of the camera, center inside the image
  bool detected = false;  // visible and not removed by dropout
};

struct TruthPerson {
  int id = 0;
  bool is_target = false;
  Point3 X = Point3::Zero();
  Point3 top = Point3::Zero();
  Point3 bottom = Point3::Zero();
  bool on_plane = false;
  std::vector<TruthView> views;
};

struct TruthFrame {
  int frame = 0;
  std::vector<TruthPerson> persons;
};

/// Noise-free box of a standing person: centered on the center projection,
/// h = 1.1 times the top-bottom pixel span, w = 0.4 h.
Bbox person_box(const CameraModel& cam, const Point3& center, const Point3& top,
                const Point3& bottom);

struct Rendered {
  Rig rig;
  std::vector<Detection> detections;  // sorted by (frame, camera, x)
  std::vector<TruthFrame> truth;
};

Rendered render_detections(const Scenario& scenario);

}  // namespace gymtrack
