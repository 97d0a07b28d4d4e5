#include "gymtrack/geometry.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <random>

using namespace gymtrack;

namespace {

Matrix3 intrinsics(double f = 1000.0) {
  Matrix3 K;
  K << f, 0, 960, 0, f, 540, 0, 0, 1;
  return K;
}

// A at the origin looking down +z; B one meter to the right, same attitude.
CameraModel cam_a() { return CameraModel(0, intrinsics(), Matrix3::Identity(), Vector3::Zero()); }
CameraModel cam_b() { return CameraModel(1, intrinsics(), Matrix3::Identity(), Vector3(-1, 0, 0)); }

// Center (0,-5,0), principal axis along world +y.
CameraModel cam_facing_y() {
  Matrix3 R;
  R << 1, 0, 0, 0, 0, -1, 0, 1, 0;
  return CameraModel(2, intrinsics(), R, -R * Vector3(0, -5, 0));
}

}  // namespace

TEST(Camera, RejectsNonRotation) {
  Matrix3 R = Matrix3::Identity();
  R(0, 0) = 1.1;
  EXPECT_THROW(CameraModel(0, intrinsics(), R, Vector3::Zero()), GeometryError);
  Matrix3 K = intrinsics();
  K(0, 0) = -1.0;
  EXPECT_THROW(CameraModel(0, K, Matrix3::Identity(), Vector3::Zero()), GeometryError);
}

TEST(Camera, ProjectAndCenter) {
  const auto b = cam_b();
  EXPECT_NEAR((b.center() - Vector3(1, 0, 0)).norm(), 0.0, 1e-12);
  const Point2 p = project(b, Point3(0, 0, 5));
  EXPECT_NEAR(p.x(), 760.0, 1e-9);
  EXPECT_NEAR(p.y(), 540.0, 1e-9);
  EXPECT_THROW(project(b, Point3(0, 0, -1)), GeometryError);
}

TEST(Fundamental, EpipolarConstraintOnKnownPair) {
  const Matrix3 F = fundamental_matrix(cam_a(), cam_b());
  const double r = Vector3(760, 540, 1).dot(F * Vector3(960, 540, 1));
  EXPECT_NEAR(r, 0.0, 1e-6);
  EXPECT_DOUBLE_EQ(F.maxCoeff(), 1.0);
}

TEST(Fundamental, ReverseIsTransposeUpToScale) {
  std::mt19937_64 rng(5);
  const auto a = oracle::random_camera(0, rng);
  const auto b = oracle::random_camera(1, rng);
  const Matrix3 ab = fundamental_matrix(a, b);
  Matrix3 ba_t = fundamental_matrix(b, a).transpose();
  Eigen::Index r, c;
  ba_t.cwiseAbs().maxCoeff(&r, &c);
  ba_t /= ba_t(r, c);
  EXPECT_LE((ab - ba_t).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Fundamental, RandomRigResiduals) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto a = oracle::random_camera(0, rng);
  const auto b = oracle::random_camera(1, rng);
  const Matrix3 F = fundamental_matrix(a, b);
  for (int i = 0; i < 20; ++i) {
    const Point3 X(u(rng), u(rng), 1.5 + u(rng));
    const double r = project(b, X).homogeneous().dot(F * project(a, X).homogeneous());
    EXPECT_LE(std::abs(r), 1e-6);
  }
}

TEST(Fundamental, CoincidentCenters) {
  EXPECT_THROW(fundamental_matrix(cam_a(), cam_a()), GeometryError);
}

TEST(EpipolarDistance, ConsistentPairIsZero) {
  const Matrix3 F = fundamental_matrix(cam_a(), cam_b());
  EXPECT_NEAR(epipolar_point_distance(F, {960, 540}, {760, 540}, 100.0), 0.0, 1e-6);
}

TEST(EpipolarDistance, PerpendicularShift) {
  // The epipolar lines of this pair are horizontal, so a vertical shift is
  // perpendicular.
  const Matrix3 F = fundamental_matrix(cam_a(), cam_b());
  EXPECT_NEAR(epipolar_point_distance(F, {960, 540}, {760, 550}, 100.0), 0.1, 1e-6);
}

TEST(EpipolarDistance, RandomRigMatchesAnalyticLine) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_camera(0, rng);
    const auto b = oracle::random_camera(1, rng);
    const Point3 X(0.2, -0.3, 1.4);
    const Point2 xa = project(a, X);
    // Two points on the ray of xa give the epipolar line in b.
    const Point3 far = a.center() + 1.2 * (X - a.center());
    const Point2 l0 = project(b, X);
    const Point2 l1 = project(b, far);
    const Eigen::Vector2d dir = (l1 - l0).normalized();
    const Point2 target = l0 + 3.0 * Eigen::Vector2d(-dir.y(), dir.x());
    ASSERT_NEAR(oracle::point_line_distance(target, l0, l1), 3.0, 1e-9);
    const double d = epipolar_point_distance(fundamental_matrix(a, b), xa, target, 150.0);
    EXPECT_NEAR(d, 0.02, 1e-6);
  }
}

TEST(EpipolarDistance, DegenerateLineAndScale) {
  EXPECT_THROW(point_line_distance({1, 1}, {0, 0, 1}), GeometryError);
  EXPECT_THROW(epipolar_point_distance(Matrix3::Identity(), {0, 0}, {0, 0}, 0.0),
               std::invalid_argument);
}

TEST(Triangulate, TwoViewKnownPoint) {
  const auto a = cam_a();
  const auto b = cam_b();
  const std::vector<Observation> obs{{a, {960, 540}}, {b, {760, 540}}};
  EXPECT_LE((triangulate(obs) - Point3(0, 0, 5)).norm(), 1e-6);
}

TEST(Triangulate, FourViewRoundTrip) {
  const Rig rig = [] {
    std::vector<CameraModel> cams;
    for (int i = 0; i < 4; ++i) {
      const double az = M_PI / 2 * i + 0.3;
      cams.push_back(oracle::camera_facing(i, {6 * std::cos(az), 6 * std::sin(az), 2.0}, {0, 0, 1.5}));
    }
    return Rig(cams);
  }();
  const Point3 X(1.2, 0.3, 2.0);
  std::vector<Observation> obs;
  for (const auto& c : rig.cameras()) obs.push_back({c, project(c, X)});
  EXPECT_LE((triangulate(obs) - X).norm(), 1e-6);
}

TEST(Triangulate, Errors) {
  const auto a = cam_a();
  std::vector<Observation> one{{a, {960, 540}}};
  EXPECT_THROW(triangulate(one), GeometryError);
  std::vector<Observation> same{{a, {960, 540}}, {a, {900, 540}}};
  EXPECT_THROW(triangulate(same), GeometryError);
  // Both rays point straight along the baseline.
  const auto b = CameraModel(1, intrinsics(), Matrix3::Identity(), Vector3(0, 0, -1));
  std::vector<Observation> parallel{{a, {960, 540}}, {b, {960, 540}}};
  try {
    triangulate(parallel);
    FAIL() << "expected IllConditioned";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), GeometryErrc::IllConditioned);
  }
}

TEST(Triangulate, OpposingViewsErrorIsAlongTheRay) {
  const auto a = oracle::camera_facing(0, {0, -5, 1}, {0, 5, 1});
  const auto b = oracle::camera_facing(1, {0, 5, 1}, {0, -5, 1});
  const double offset = 5.0 * std::tan(M_PI / 180.0);  // rays meet at 178 degrees
  const Point3 X(offset, 0.0, 1.0);
  ASSERT_NEAR(ray_angle_deg(a, project(a, X), b, project(b, X)), 178.0, 1e-6);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> noise(0.0, 2.0);
  double along = 0.0, across = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::vector<Observation> obs{
        {a, project(a, X) + Point2(noise(rng), noise(rng))},
        {b, project(b, X) + Point2(noise(rng), noise(rng))}};
    const Vector3 e = triangulate(obs) - X;
    along += std::abs(e.y());
    across += std::hypot(e.x(), e.z());
  }
  EXPECT_GE(along, 5.0 * across);
}

TEST(PixelRay, Examples) {
  const auto a = cam_a();
  EXPECT_LE((pixel_ray_world(a, {960, 540}) - Vector3(0, 0, 1)).norm(), 1e-12);
  EXPECT_LE((pixel_ray_world(a, {1960, 540}) - Vector3(1, 0, 1).normalized()).norm(), 1e-12);
  EXPECT_LE((pixel_ray_world(cam_facing_y(), {960, 540}) - Vector3(0, 1, 0)).norm(), 1e-9);
}

TEST(RayPlane, AxisAligned) {
  const auto c = cam_facing_y();
  const PlaneSpec plane{{0, 1, 0}, {0, 0, 0}};
  EXPECT_LE(ray_plane_intersect(c, {960, 540}, plane).norm(), 1e-9);
  try {
    ray_plane_intersect(c, {960, 540}, PlaneSpec{{1, 0, 0}, {0, 0, 0}});
    FAIL() << "expected RayParallelToPlane";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), GeometryErrc::RayParallelToPlane);
  }
  try {
    ray_plane_intersect(c, {960, 540}, PlaneSpec{{0, 1, 0}, {0, -8, 0}});
    FAIL() << "expected BehindCamera";
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), GeometryErrc::BehindCamera);
  }
}

TEST(RayPlane, RandomRoundTrip) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const PlaneSpec plane{{1, 0, 0}, {0, 0, 0}};
  for (int i = 0; i < 200; ++i) {
    const auto cam = oracle::random_camera(0, rng);
    const Point3 X(0.0, 1.5 * u(rng), 1.5 + u(rng));
    if (cam.depth(X) < 0.5) continue;
    const Point3 back = ray_plane_intersect(cam, project(cam, X), plane);
    EXPECT_LE((back - X).norm(), 1e-9);
  }
}

TEST(Plane, Validate) {
  EXPECT_THROW((PlaneSpec{{1, 1, 0}, {0, 0, 0}}.validate()), GeometryError);
  EXPECT_NO_THROW((PlaneSpec{{0, 1, 0}, {0, 0, 0}}.validate()));
  EXPECT_TRUE((PlaneSpec{{0, 1, 0}, {0, 0, 0}}.is_vertical()));
}

TEST(Rig, LookupAndCache) {
  const Rig rig({cam_a(), cam_b()});
  EXPECT_TRUE(rig.contains(1));
  EXPECT_FALSE(rig.contains(7));
  EXPECT_THROW(rig.camera(7), std::out_of_range);
  EXPECT_LE((rig.fundamental(0, 1) - fundamental_matrix(cam_a(), cam_b())).norm(), 0.0);
  EXPECT_THROW(Rig({cam_a(), cam_a()}), std::invalid_argument);
}
