#include "gymtrack/geometry.hpp"
#include "gymtrack/sim.hpp"

#include <benchmark/benchmark.h>

using namespace gymtrack;

namespace {

Rig bench_rig() {
  RigParams p;
  p.azimuth_offset_deg = 45.0;
  return make_rig(p);
}

void BM_Triangulate(benchmark::State& state) {
  const Rig rig = bench_rig();
  const Point3 X(0.1, 0.4, 1.7);
  std::vector<Observation> obs;
  for (int i = 0; i < state.range(0); ++i) {
    const auto& cam = rig.cameras()[static_cast<std::size_t>(i)];
    obs.push_back({cam, project(cam, X)});
  }
  for (auto _ : state) benchmark::DoNotOptimize(triangulate(obs));
}
BENCHMARK(BM_Triangulate)->Arg(2)->Arg(3)->Arg(4);

void BM_RayPlane(benchmark::State& state) {
  const Rig rig = bench_rig();
  const PlaneSpec plane;
  const Point2 p = project(rig.camera(0), Point3(0.0, 0.5, 1.6));
  for (auto _ : state) benchmark::DoNotOptimize(ray_plane_intersect(rig.camera(0), p, plane));
}
BENCHMARK(BM_RayPlane);

void BM_EpipolarDistance(benchmark::State& state) {
  const Rig rig = bench_rig();
  const Matrix3& F = rig.fundamental(0, 1);
  const Point2 a(900, 520), b(1010, 560);
  for (auto _ : state) benchmark::DoNotOptimize(epipolar_point_distance(F, a, b, 250.0));
}
BENCHMARK(BM_EpipolarDistance);

}  // namespace
