#include "gymtrack/sim.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gymtrack {

namespace {

constexpr double kGravity = 9.81;
constexpr double kFps = 30.0;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream tags keep the draws of different purposes independent.
enum Stream : std::uint64_t {
  kJumpStream = 1,
  kWalkStream = 2,
  kNoiseStream = 3,
  kPhaseStream = 4,
};

std::uint64_t stream_id(std::uint64_t tag, std::uint64_t a, std::uint64_t b = 0) {
  return splitmix64(splitmix64(tag) ^ (a * 0x100000001b3ULL) ^ (b << 20));
}

Vector3 in_plane_horizontal(const PlaneSpec& plane) {
  Vector3 u = plane.normal.cross(Vector3::UnitZ());
  if (u.norm() < 1e-12) throw std::invalid_argument("simulator: plane must not be horizontal");
  return u.normalized();
}

double smooth_bump(int frame, const OffPlaneInterval& iv) {
  if (frame < iv.from || frame > iv.to || iv.to <= iv.from) return 0.0;
  const double s = static_cast<double>(frame - iv.from) / (iv.to - iv.from);
  const double b = std::sin(M_PI * s);
  return iv.offset * b * b;
}

}  // namespace

Rig make_rig(const RigParams& params) {
  if (!(params.radius > 0.0)) throw std::invalid_argument("make_rig: radius must be positive");
  if (!(params.focal > 0.0) || params.image_width <= 0 || params.image_height <= 0) {
    throw std::invalid_argument("make_rig: focal length and resolution must be positive");
  }
  Matrix3 K = Matrix3::Identity();
  K(0, 0) = params.focal;
  K(1, 1) = params.focal;
  K(0, 2) = 0.5 * params.image_width;
  K(1, 2) = 0.5 * params.image_height;

  std::vector<CameraModel> cams;
  for (int i = 0; i < 4; ++i) {
    const double az = (params.azimuth_offset_deg + 90.0 * i) * M_PI / 180.0;
    const Point3 eye(params.aim.x() + params.radius * std::cos(az),
                     params.aim.y() + params.radius * std::sin(az), params.height);
    cams.push_back(CameraModel::look_at(i, K, eye, params.aim));
  }
  return Rig(std::move(cams));
}

std::uint64_t CounterRng::bits(std::uint64_t stream, std::uint64_t index) const {
  return splitmix64(splitmix64(seed_ ^ splitmix64(stream)) + index);
}

double CounterRng::uniform(std::uint64_t stream, std::uint64_t index) const {
  return (static_cast<double>(bits(stream, index) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t stream, std::uint64_t index) const {
  const double u1 = uniform(stream, 2 * index);
  const double u2 = uniform(stream, 2 * index + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Trajectory synth_trajectory(const PersonSpec& spec, int frames, std::uint64_t seed,
                            const PlaneSpec& plane) {
  if (frames < 0) throw std::invalid_argument("synth_trajectory: negative duration");
  const CounterRng rng(seed);
  Trajectory out;
  out.body_height = spec.body_height;
  out.center.reserve(static_cast<std::size_t>(frames));
  out.on_plane.reserve(static_cast<std::size_t>(frames));

  if (spec.kind == TrajectoryKind::OnPlaneJump) {
    if (!plane.is_vertical(1e-9)) {
      throw std::invalid_argument("synth_trajectory: jumps need a vertical plane");
    }
    const Vector3 u = in_plane_horizontal(plane);
    const double phase = 2.0 * M_PI * rng.uniform(kPhaseStream, 0);

    // Alternate rest and ballistic phases; the flight time follows from the
    // apex height.
    std::vector<double> lift(static_cast<std::size_t>(frames), 0.0);
    std::uint64_t draw = 0;
    int f = 0;
    while (f < frames) {
      const int rest = spec.rest_min + static_cast<int>(rng.uniform(kJumpStream, draw++) *
                                                        (spec.rest_max - spec.rest_min + 1));
      f += std::max(rest, 1);
      const double apex = spec.jump_min + rng.uniform(kJumpStream, draw++) * (spec.jump_max - spec.jump_min);
      const int flight = static_cast<int>(std::lround(2.0 * std::sqrt(2.0 * apex / kGravity) * kFps));
      for (int k = 0; k <= flight && f + k < frames; ++k) {
        const double s = static_cast<double>(k) / flight;
        lift[static_cast<std::size_t>(f + k)] = 4.0 * apex * s * (1.0 - s);
      }
      f += flight + 1;
    }
    for (int i = 0; i < frames; ++i) {
      const double lateral =
          spec.lateral_amplitude * std::sin(2.0 * M_PI * i / spec.lateral_period + phase);
      double offset = 0.0;
      for (const auto& iv : spec.off_plane) offset += smooth_bump(i, iv);
      Point3 X = plane.point + lateral * u + offset * plane.normal;
      X.z() = spec.base_height + lift[static_cast<std::size_t>(i)];
      out.center.push_back(X);
      out.on_plane.push_back(offset == 0.0);
    }
    return out;
  }

  const auto& r = spec.region;
  auto waypoint = [&](std::uint64_t k) {
    return Point3(r[0] + rng.uniform(kWalkStream, 2 * k) * (r[2] - r[0]),
                  r[1] + rng.uniform(kWalkStream, 2 * k + 1) * (r[3] - r[1]), spec.walk_height);
  };
  std::uint64_t k = 0;
  Point3 pos = waypoint(k++);
  Point3 goal = waypoint(k++);
  for (int i = 0; i < frames; ++i) {
    out.center.push_back(pos);
    out.on_plane.push_back(false);
    Vector3 d = goal - pos;
    if (d.norm() <= spec.speed) {
      pos = goal;
      goal = waypoint(k++);
    } else {
      pos += spec.speed * d.normalized();
    }
  }
  return out;
}

void Scenario::validate() const {
  if (frames <= 0) throw std::invalid_argument("scenario: frames must be positive");
  if (!(noise_px >= 0.0)) throw std::invalid_argument("scenario: noise_px must be >= 0");
  if (!(rig.radius > 0.0)) throw std::invalid_argument("scenario: rig.radius must be positive");
  plane.validate();
  space.validate();
  for (const auto& d : distractors) {
    if (d.kind != TrajectoryKind::OffPlaneWalk) {
      throw std::invalid_argument("scenario: distractors must be off_plane_walk");
    }
    if (!(d.region[0] <= d.region[2] && d.region[1] <= d.region[3])) {
      throw std::invalid_argument("scenario: distractor region must be [x0, y0, x1, y1]");
    }
    if (!(d.speed > 0.0 && d.speed <= 1.0)) {
      throw std::invalid_argument("scenario: distractor speed must lie in (0, 1] m/frame");
    }
  }
  if (target.kind != TrajectoryKind::OnPlaneJump) {
    throw std::invalid_argument("scenario: target must be on_plane_jump");
  }
  if (target.lateral_period <= 0 || target.rest_min < 1 || target.rest_max < target.rest_min ||
      !(target.jump_min >= 0.0 && target.jump_max >= target.jump_min)) {
    throw std::invalid_argument("scenario: malformed target motion parameters");
  }
  for (const auto& rule : dropout) {
    if (rule.to < rule.from) throw std::invalid_argument("scenario: dropout range reversed");
    for (int c : rule.cameras)
      if (c < 0 || c > 3) throw std::invalid_argument("scenario: dropout camera out of range");
  }
}

bool Scenario::dropped(int frame, int camera, int person) const {
  for (const auto& rule : dropout) {
    if (frame < rule.from || frame > rule.to) continue;
    if (rule.person && *rule.person != person) continue;
    if (std::find(rule.cameras.begin(), rule.cameras.end(), camera) != rule.cameras.end()) return true;
  }
  return false;
}

Bbox person_box(const CameraModel& cam, const Point3& center, const Point3& top,
                const Point3& bottom) {
  const Point2 c = project(cam, center);
  const double span = (project(cam, top) - project(cam, bottom)).norm();
  const double h = 1.1 * span;
  return {c.x(), c.y(), 0.4 * h, h};
}

Rendered render_detections(const Scenario& scenario) {
  scenario.validate();
  Rendered out{make_rig(scenario.rig), {}, {}};

  std::vector<Trajectory> people;
  people.push_back(synth_trajectory(scenario.target, scenario.frames, splitmix64(scenario.seed), scenario.plane));
  for (std::size_t i = 0; i < scenario.distractors.size(); ++i) {
    people.push_back(synth_trajectory(scenario.distractors[i], scenario.frames,
                                      splitmix64(scenario.seed + 1 + i), scenario.plane));
  }

  const CounterRng rng(scenario.seed);
  const double width = scenario.rig.image_width;
  const double height = scenario.rig.image_height;
  out.truth.reserve(static_cast<std::size_t>(scenario.frames));
  for (int f = 0; f < scenario.frames; ++f) {
    TruthFrame tf;
    tf.frame = f;
    for (std::size_t p = 0; p < people.size(); ++p) {
      const auto& traj = people[p];
      const auto i = static_cast<std::size_t>(f);
      TruthPerson person;
      person.id = static_cast<int>(p);
      person.is_target = p == 0;
      person.X = traj.center[i];
      person.top = traj.top(i);
      person.bottom = traj.bottom(i);
      person.on_plane = traj.on_plane[i];
      for (const auto& cam : out.rig.cameras()) {
        TruthView view;
        view.camera = cam.id();
        const double min_depth = std::min({cam.depth(person.X), cam.depth(person.top), cam.depth(person.bottom)});
        if (min_depth > 1e-3) {
          view.box = person_box(cam, person.X, person.top, person.bottom);
          view.visible = view.box.x >= 0.0 && view.box.x < width && view.box.y >= 0.0 &&
                         view.box.y < height;
        }
        view.detected = view.visible && !scenario.dropped(f, cam.id(), person.id);
        if (view.detected) {
          const std::uint64_t s = stream_id(kNoiseStream, static_cast<std::uint64_t>(p),
                                            static_cast<std::uint64_t>(cam.id()));
          const auto base = static_cast<std::uint64_t>(f) * 4;
          Bbox b = view.box;
          b.x += scenario.noise_px * rng.normal(s, base);
          b.y += scenario.noise_px * rng.normal(s, base + 1);
          b.w = std::max(1.0, b.w + 0.5 * scenario.noise_px * rng.normal(s, base + 2));
          b.h = std::max(1.0, b.h + 0.5 * scenario.noise_px * rng.normal(s, base + 3));
          out.detections.push_back({f, cam.id(), b, 1.0});
        }
        person.views.push_back(view);
      }
      tf.persons.push_back(std::move(person));
    }
    out.truth.push_back(std::move(tf));
  }
  std::sort(out.detections.begin(), out.detections.end(), [](const Detection& a, const Detection& b) {
    if (a.frame != b.frame) return a.frame < b.frame;
    if (a.camera != b.camera) return a.camera < b.camera;
    return a.box.x < b.box.x;
  });
  return out;
}

}  // namespace gymtrack
