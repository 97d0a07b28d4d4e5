// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include "gymtrack/assignment.hpp"
#include "gymtrack/cross_view.hpp"
#include "gymtrack/eval.hpp"
#include "gymtrack/io.hpp"
#include "gymtrack/pipeline.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <Eigen/Geometry>
#include <spdlog/fmt/fmt.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <unistd.h>

using namespace gymtrack;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

fs::path scenario_path(const std::string& name) {
  return fs::path(GYMTRACK_SCENARIO_DIR) / (name + ".json");
}

// 1. Triangulation and ray-plane round trips.
Outcome geometry_round_trips() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> views(2, 4);

  double worst_tri = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Point3 X(u(rng), u(rng), 1.5 + u(rng));
    std::vector<CameraModel> cams;
    const int n = views(rng);
    while (static_cast<int>(cams.size()) < n) {
      auto cam = oracle::random_camera(static_cast<int>(cams.size()), rng);
      if (cam.depth(X) > 0.5) cams.push_back(cam);
    }
    std::vector<Observation> obs;
    for (const auto& c : cams) obs.push_back({c, project(c, X)});
    worst_tri = std::max(worst_tri, (triangulate(obs) - X).norm());
  }

  double worst_plane = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    PlaneSpec plane;
    plane.normal = Vector3(u(rng), u(rng), 0.3 * u(rng)).normalized();
    plane.point = Point3(0.3 * u(rng), 0.3 * u(rng), 1.5);
    // A random point of the plane near the rig center.
    const Vector3 a = plane.normal.unitOrthogonal();
    const Vector3 b = plane.normal.cross(a);
    const Point3 X = plane.point + 1.5 * u(rng) * a + 1.5 * u(rng) * b;
    auto cam = oracle::random_camera(0, rng);
    if (cam.depth(X) <= 0.5 || std::abs(plane.normal.dot(pixel_ray_world(cam, project(cam, X)))) < 1e-3) {
      --trial;  // grazing or behind: draw again
      continue;
    }
    worst_plane = std::max(worst_plane, (ray_plane_intersect(cam, project(cam, X), plane) - X).norm());
  }
  const double elapsed = seconds_since(t0);
  return {worst_tri <= 1e-6 && worst_plane <= 1e-9 && elapsed < 10.0,
          fmt::format("max triangulation error {:.2e} m, max ray-plane error {:.2e} m, {:.2f} s",
                      worst_tri, worst_plane, elapsed)};
}

// 2. Clustering against the exhaustive-scan transcription.
Outcome linkage_oracle() {
  std::mt19937_64 rng(2002);
  const Rig rig = fixture::desk_rig();
  std::uniform_int_distribution<int> cam(0, 3);
  std::uniform_int_distribution<int> shift(-8, 8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    DistanceMatrix D(n);
    if (trial % 2 == 0) {
      D = fixture::random_linkage_matrix(rng, n);
    } else {
      // Real segments of up to three people, with partial overlaps and
      // repeated cameras so empty and infinite entries arise naturally.
      std::vector<Point3> people;
      for (int p = 0; p < 3; ++p) people.emplace_back(u(rng), 2.0 * u(rng), 1.5 + 0.3 * u(rng));
      std::vector<WindowSegment2D> segs;
      for (std::size_t i = 0; i < n; ++i) {
        const Point3 base = people[static_cast<std::size_t>(trial + static_cast<int>(i)) % 3];
        auto seg = fixture::project_segment(rig, cam(rng), static_cast<int>(i), 0,
                                            [&](int f) { return base + Vector3(0, 0.02 * f, 0); }, 2.0, &rng);
        const int s = shift(rng);
        if (s > 0) {
          for (int f = 0; f < s; ++f) seg.boxes.erase(f), seg.observed.erase(f);
        } else {
          for (int f = 10 + s + 1; f <= 10; ++f) seg.boxes.erase(f), seg.observed.erase(f);
        }
        if (seg.boxes.empty()) seg.boxes.emplace(5, Bbox{960, 540, 40, 100});
        segs.push_back(std::move(seg));
      }
      D = segment_distance_matrix(segs, rig);
    }
    if (cluster_complete_linkage(D, 0.3) != oracle::cluster_by_scanning(D, 0.3)) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} of 1000 trials differ", mismatches)};
}

// 3. Assignment against brute force.
Outcome assignment_oracle() {
  std::mt19937_64 rng(3003);
  std::uniform_int_distribution<int> dim(1, 7);
  std::uniform_int_distribution<int> eighths(0, 80);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto rows = static_cast<std::size_t>(dim(rng));
    const auto cols = static_cast<std::size_t>(dim(rng));
    std::vector<std::vector<std::optional<double>>> m(rows, std::vector<std::optional<double>>(cols));
    CostMatrix D(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        m[r][c] = eighths(rng) / 8.0;  // dyadic, so sums are exact
        D.set(r, c, m[r][c]);
      }
    const auto expected = oracle::brute_force_assignment(m);
    const auto got = assign(D, 1e9);
    if (static_cast<int>(got.pairs.size()) != expected.pairs || got.total_cost != expected.cost) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} of 1000 matrices differ", mismatches)};
}

std::map<int, Point3> estimate_map(const std::vector<TargetRecord>& records) {
  std::map<int, Point3> out;
  for (const auto& r : records) out[r.frame] = r.X;
  return out;
}

std::map<int, Point3> truth_map(const std::vector<TruthFrame>& truth) {
  std::map<int, Point3> out;
  for (const auto& tf : truth)
    for (const auto& p : tf.persons)
      if (p.is_target) out[tf.frame] = p.X;
  return out;
}

template <class Pred>
std::map<int, Point3> restrict(const std::map<int, Point3>& m, Pred keep) {
  std::map<int, Point3> out;
  for (const auto& [f, X] : m)
    if (keep(f)) out.emplace(f, X);
  return out;
}

// 4. Mode ordering on the opposite-view episode.
Outcome mode_ordering() {
  const auto t0 = Clock::now();
  const auto file = read_scenario(scenario_path("opposite-only-episode"));
  if (file.scenario.dropout.empty()) return {false, "scenario has no dropout episode"};
  const int ep_from = file.scenario.dropout.front().from;
  const int ep_to = file.scenario.dropout.front().to;
  const CascadeMode modes[] = {CascadeMode::Cascade, CascadeMode::TriangulationOnly, CascadeMode::PlaneOnly};
  double episode[3] = {0, 0, 0};
  double four_view[3] = {0, 0, 0};
  const int seeds = 20;
  try {
    for (int k = 0; k < seeds; ++k) {
      Scenario s = file.scenario;
      s.seed = file.scenario.seed + static_cast<std::uint64_t>(k);
      const auto rendered = render_detections(s);
      const auto truth = truth_map(rendered.truth);
      for (int m = 0; m < 3; ++m) {
        PipelineConfig cfg = file.routine;
        cfg.cascade.mode = modes[m];
        const auto est = estimate_map(run_pipeline(rendered.detections, rendered.rig, cfg).records);
        const auto in_episode = [&](int f) { return f >= ep_from && f <= ep_to; };
        episode[m] += aed(est, restrict(truth, in_episode)).aed / seeds;
        four_view[m] += aed(est, restrict(truth, [&](int f) { return !in_episode(f); })).aed / seeds;
      }
    }
  } catch (const EvalError& e) {
    return {false, std::string("evaluation failed: ") + e.what()};
  }
  const double elapsed = seconds_since(t0);
  const bool ok = episode[0] <= 0.5 * episode[1] && episode[2] <= episode[0] &&
                  four_view[2] >= four_view[0] && elapsed < 120.0;
  return {ok, fmt::format("episode AED cascade {:.4f} / triangulation_only {:.4f} / plane_only {:.4f}; "
                          "4-view AED cascade {:.4f} / plane_only {:.4f}; {} seeds, {:.1f} s",
                          episode[0], episode[1], episode[2], four_view[0], four_view[2], seeds, elapsed)};
}

// 5. Clean four-view run.
Outcome clean_run() {
  const auto file = read_scenario(scenario_path("clean-4cam"));
  const auto rendered = render_detections(file.scenario);
  const auto out = run_pipeline(rendered.detections, rendered.rig, file.routine);
  const auto report = evaluate(out.records, rendered.truth);
  const bool ok = report.id_switches == 0 && report.aed_m <= 0.05 && report.failure_rate <= 0.002;
  return {ok, fmt::format("{} frames, {} ID switches, AED {:.4f} m, failure rate {:.4f}%, coverage {:.3f}",
                          file.scenario.frames, report.id_switches, report.aed_m,
                          100.0 * report.failure_rate, report.coverage)};
}

// 6. A short target loss is bridged, a long one is not.
Outcome gap_handling() {
  auto run_with_loss = [](int length, int& interpolated, int& inside, int& records_inside) {
    auto file = read_scenario(scenario_path("clean-4cam"));
    Scenario s = file.scenario;
    s.frames = 600;
    const int from = 300;
    s.dropout.push_back({{0, 1, 2, 3}, from, from + length - 1, 0});
    const auto rendered = render_detections(s);
    const auto out = run_pipeline(rendered.detections, rendered.rig, file.routine);
    interpolated = inside = records_inside = 0;
    for (const auto& r : out.records) {
      const bool in_loss = r.frame >= from && r.frame < from + length;
      records_inside += in_loss;
      if (r.provenance == Provenance::Interpolated) {
        ++interpolated;
        inside += in_loss;
      }
    }
  };
  int i5 = 0, in5 = 0, r5 = 0, i12 = 0, in12 = 0, r12 = 0;
  run_with_loss(5, i5, in5, r5);
  run_with_loss(12, i12, in12, r12);
  const bool ok = i5 == 5 && in5 == 5 && r5 == 5 && i12 == 0 && r12 == 0;
  return {ok, fmt::format("5-frame loss: {} interpolated ({} inside the loss); "
                          "12-frame loss: {} interpolated, {} frames emitted inside the loss",
                          i5, in5, i12, r12)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 7. Byte-identical CLI outputs for identical inputs.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / fmt::format("gymtrack_acceptance_{}", ::getpid());
  fs::remove_all(root);
  auto run = [&](const std::string& tag, const std::string& extra) {
    const fs::path dir = root / tag;
    const std::string cmd = fmt::format("\"{}\" run \"{}\" --out \"{}\" {} > /dev/null", GYMTRACK_CLI_PATH,
                                        scenario_path("opposite-only-episode").string(), dir.string(), extra);
    if (std::system(cmd.c_str()) != 0) throw std::runtime_error("command failed: " + cmd);
    return std::pair{slurp(dir / "tracklets.jsonl"), slurp(dir / "report.json")};
  };
  Outcome o;
  try {
    const auto a = run("a", "");
    const auto b = run("b", "");
    const auto c = run("c", "--threads 4");
    const bool same = a == b && !a.first.empty() && !a.second.empty();
    const bool threads_same = a.first == c.first;
    o = {same && threads_same,
         fmt::format("tracklets {} bytes, report {} bytes; repeat run {}, 4-thread tracklets {}",
                     a.first.size(), a.second.size(), same ? "identical" : "DIFFERENT",
                     threads_same ? "identical" : "DIFFERENT")};
  } catch (const std::exception& e) {
    o = {false, e.what()};
  }
  fs::remove_all(root);
  return o;
}

// 8. Error anisotropy of two nearly opposite views.
Outcome anisotropy() {
  const auto a = oracle::camera_facing(0, {0, -5, 1}, {0, 5, 1});
  const auto b = oracle::camera_facing(1, {0, 5, 1}, {0, -5, 1});
  const Point3 X(5.0 * std::tan(M_PI / 180.0), 0.0, 1.0);
  const double angle = ray_angle_deg(a, project(a, X), b, project(b, X));
  std::mt19937_64 rng(8008);
  std::normal_distribution<double> noise(0.0, 2.0);
  double along = 0.0, across = 0.0;
  // The rays run almost exactly along world y.
  for (int i = 0; i < 1000; ++i) {
    const std::vector<Observation> obs{{a, project(a, X) + Point2(noise(rng), noise(rng))},
                                       {b, project(b, X) + Point2(noise(rng), noise(rng))}};
    const Vector3 e = triangulate(obs) - X;
    along += std::abs(e.y());
    across += std::hypot(e.x(), e.z());
  }
  return {along >= 5.0 * across && std::abs(angle - 178.0) < 1e-6,
          fmt::format("ray angle {:.3f} deg, mean along-ray error {:.4f} m, perpendicular {:.4f} m, ratio {:.1f}",
                      angle, along / 1000, across / 1000, along / across)};
}

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"geometry round trips", geometry_round_trips},
      {"clustering oracle equivalence", linkage_oracle},
      {"assignment oracle", assignment_oracle},
      {"mode ordering on opposite-view episode", mode_ordering},
      {"clean four-view run", clean_run},
      {"gap handling", gap_handling},
      {"determinism", determinism},
      {"near-opposite error anisotropy", anisotropy},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
