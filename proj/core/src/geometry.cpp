#include "gymtrack/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <set>

namespace gymtrack {

namespace {

constexpr double kDepthEpsilon = 1e-9;
constexpr double kCenterEpsilon = 1e-9;
constexpr double kParallelRayRad = 1e-6;
constexpr double kPlaneEpsilon = 1e-9;
constexpr double kRotationTolerance = 1e-9;

Matrix3 skew(const Vector3& v) {
  Matrix3 S;
  S << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return S;
}

}  // namespace

const char* to_string(GeometryErrc code) {
  switch (code) {
    case GeometryErrc::InvalidCamera: return "InvalidCamera";
    case GeometryErrc::InvalidPlane: return "InvalidPlane";
    case GeometryErrc::DegenerateDepth: return "DegenerateDepth";
    case GeometryErrc::CoincidentCenters: return "CoincidentCenters";
    case GeometryErrc::DegenerateLine: return "DegenerateLine";
    case GeometryErrc::InsufficientViews: return "InsufficientViews";
    case GeometryErrc::IllConditioned: return "IllConditioned";
    case GeometryErrc::RayParallelToPlane: return "RayParallelToPlane";
    case GeometryErrc::BehindCamera: return "BehindCamera";
  }
  return "Unknown";
}

CameraModel::CameraModel(int id, const Matrix3& K, const Matrix3& R,
                         const Vector3& t)
    : id_(id), K_(K), R_(R), t_(t) {
  if (!K.allFinite() || !R.allFinite() || !t.allFinite()) {
    throw GeometryError(GeometryErrc::InvalidCamera,
                        "camera " + std::to_string(id) + ": non-finite parameters");
  }
  if (!(K(0, 0) > 0.0) || !(K(1, 1) > 0.0) || K(2, 2) != 1.0 ||
      K(1, 0) != 0.0 || K(2, 0) != 0.0 || K(2, 1) != 0.0) {
    throw GeometryError(GeometryErrc::InvalidCamera,
                        "camera " + std::to_string(id) + ": malformed intrinsics");
  }
  const double ortho = (R.transpose() * R - Matrix3::Identity()).cwiseAbs().maxCoeff();
  if (ortho >= kRotationTolerance || std::abs(R.determinant() - 1.0) > kRotationTolerance) {
    throw GeometryError(GeometryErrc::InvalidCamera,
                        "camera " + std::to_string(id) + ": R is not a rotation");
  }
  P_.leftCols<3>() = K_ * R_;
  P_.col(3) = K_ * t_;
  center_ = -R_.transpose() * t_;
  K_inv_ = K_.inverse();
}

CameraModel CameraModel::look_at(int id, const Matrix3& K, const Point3& eye,
                                 const Point3& target, const Vector3& up) {
  const Vector3 forward = (target - eye).normalized();
  Vector3 right = forward.cross(up);
  if (right.norm() < 1e-12) {
    throw GeometryError(GeometryErrc::InvalidCamera,
                        "look_at: viewing direction parallel to up vector");
  }
  right.normalize();
  const Vector3 down = forward.cross(right);
  Matrix3 R;
  R.row(0) = right.transpose();
  R.row(1) = down.transpose();
  R.row(2) = forward.transpose();
  // Re-orthonormalize so the constructor tolerance holds after rounding.
  Eigen::JacobiSVD<Matrix3> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
  R = svd.matrixU() * svd.matrixV().transpose();
  return CameraModel(id, K, R, -R * eye);
}

void PlaneSpec::validate() const {
  if (!normal.allFinite() || !point.allFinite() ||
      std::abs(normal.norm() - 1.0) > 1e-9) {
    throw GeometryError(GeometryErrc::InvalidPlane, "plane normal must be unit length");
  }
}

Point2 project(const CameraModel& cam, const Point3& X) {
  const double depth = cam.depth(X);
  if (depth <= kDepthEpsilon) {
    throw GeometryError(GeometryErrc::DegenerateDepth, "point on or behind principal plane");
  }
  const Vector3 x = cam.P() * X.homogeneous();
  return x.hnormalized();
}

Matrix3 fundamental_matrix(const CameraModel& from, const CameraModel& to) {
  if ((from.center() - to.center()).norm() <= kCenterEpsilon) {
    throw GeometryError(GeometryErrc::CoincidentCenters, "camera centers coincide");
  }
  const Matrix3 R_rel = to.R() * from.R().transpose();
  const Vector3 t_rel = to.t() - R_rel * from.t();
  Matrix3 F = to.K_inverse().transpose() * skew(t_rel) * R_rel * from.K_inverse();

  Eigen::Index r = 0, c = 0;
  F.cwiseAbs().maxCoeff(&r, &c);
  F /= F(r, c);
  return F;
}

EpipolarLine epipolar_line(const Matrix3& F, const Point2& source) {
  const Vector3 l = F * source.homogeneous();
  return {l.x(), l.y(), l.z()};
}

double point_line_distance(const Point2& p, const EpipolarLine& line) {
  const double norm = std::hypot(line.l1, line.l2);
  if (norm == 0.0) {
    throw GeometryError(GeometryErrc::DegenerateLine, "line has zero normal");
  }
  return std::abs(line.l1 * p.x() + line.l2 * p.y() + line.l3) / norm;
}

double epipolar_point_distance(const Matrix3& F, const Point2& source,
                               const Point2& target, double target_scale) {
  if (!(target_scale > 0.0)) {
    throw std::invalid_argument("epipolar_point_distance: scale must be positive");
  }
  return point_line_distance(target, epipolar_line(F, source)) / target_scale;
}

Vector3 pixel_ray_world(const CameraModel& cam, const Point2& p) {
  // For zero skew this is [(x-cx)/fx, (y-cy)/fy, 1] rotated into the world.
  const Vector3 ray_cam = cam.K_inverse() * p.homogeneous();
  return (cam.R().transpose() * ray_cam).normalized();
}

double ray_angle_deg(const CameraModel& a, const Point2& pa,
                     const CameraModel& b, const Point2& pb) {
  const Vector3 ra = pixel_ray_world(a, pa);
  const Vector3 rb = pixel_ray_world(b, pb);
  const double angle = std::atan2(ra.cross(rb).norm(), ra.dot(rb));
  return angle * 180.0 / M_PI;
}

Point3 triangulate(std::span<const Observation> observations) {
  std::set<int> ids;
  for (const auto& obs : observations) ids.insert(obs.camera.get().id());
  if (observations.size() < 2 || ids.size() < 2) {
    throw GeometryError(GeometryErrc::InsufficientViews,
                        "triangulation needs at least two distinct views");
  }
  if (ids.size() != observations.size()) {
    throw std::invalid_argument("triangulate: duplicate camera in observations");
  }

  std::vector<Vector3> rays;
  rays.reserve(observations.size());
  for (const auto& obs : observations) rays.push_back(pixel_ray_world(obs.camera, obs.pixel));
  bool any_baseline = false;
  for (std::size_t i = 0; i < rays.size() && !any_baseline; ++i) {
    for (std::size_t j = i + 1; j < rays.size(); ++j) {
      if (rays[i].cross(rays[j]).norm() >= std::sin(kParallelRayRad)) {
        any_baseline = true;
        break;
      }
    }
  }
  if (!any_baseline) {
    throw GeometryError(GeometryErrc::IllConditioned, "viewing rays are parallel");
  }

  const auto n = static_cast<Eigen::Index>(observations.size());
  Eigen::MatrixXd A(2 * n, 4);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    const Matrix34& P = obs.camera.get().P();
    A.row(2 * i) = obs.pixel.x() * P.row(2) - P.row(0);
    A.row(2 * i + 1) = obs.pixel.y() * P.row(2) - P.row(1);
  }
  for (Eigen::Index r = 0; r < A.rows(); ++r) {
    const double norm = A.row(r).norm();
    if (norm > 0.0) A.row(r) /= norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::Vector4d Xh = svd.matrixV().col(3);
  if (std::abs(Xh(3)) < 1e-14 * Xh.norm()) {
    throw GeometryError(GeometryErrc::IllConditioned, "triangulated point at infinity");
  }
  Point3 X = Xh.head<3>() / Xh(3);

  // One Gauss-Newton step on sum ||x_c - pi(P_c X)||^2.
  Eigen::MatrixXd J(2 * n, 3);
  Eigen::VectorXd r(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& obs = observations[static_cast<std::size_t>(i)];
    const Matrix34& P = obs.camera.get().P();
    const Vector3 x = P * X.homogeneous();
    const double w = x.z();
    if (std::abs(w) < kDepthEpsilon) return X;
    r(2 * i) = obs.pixel.x() - x.x() / w;
    r(2 * i + 1) = obs.pixel.y() - x.y() / w;
    J.row(2 * i) = (P.block<1, 3>(0, 0) - (x.x() / w) * P.block<1, 3>(2, 0)) / w;
    J.row(2 * i + 1) = (P.block<1, 3>(1, 0) - (x.y() / w) * P.block<1, 3>(2, 0)) / w;
  }
  const Eigen::LDLT<Matrix3> ldlt(J.transpose() * J);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return X;
  const Vector3 step = ldlt.solve(J.transpose() * r);
  if (step.allFinite()) X += step;
  return X;
}

Point3 ray_plane_intersect(const CameraModel& cam, const Point2& p,
                           const PlaneSpec& plane) {
  const Vector3 v = pixel_ray_world(cam, p);
  const double denom = plane.normal.dot(v);
  if (std::abs(denom) <= kPlaneEpsilon) {
    throw GeometryError(GeometryErrc::RayParallelToPlane, "ray parallel to plane");
  }
  const double s = plane.normal.dot(plane.point - cam.center()) / denom;
  if (s <= 0.0) {
    throw GeometryError(GeometryErrc::BehindCamera, "plane intersection behind camera");
  }
  return cam.center() + s * v;
}

Rig::Rig(std::vector<CameraModel> cameras) : cameras_(std::move(cameras)) {
  for (std::size_t i = 0; i < cameras_.size(); ++i) {
    if (!index_.emplace(cameras_[i].id(), i).second) {
      throw std::invalid_argument("rig: duplicate camera id " +
                                  std::to_string(cameras_[i].id()));
    }
  }
  for (const auto& a : cameras_) {
    for (const auto& b : cameras_) {
      if (a.id() == b.id()) continue;
      fundamentals_.emplace(std::pair{a.id(), b.id()}, fundamental_matrix(a, b));
    }
  }
}

bool Rig::contains(int id) const { return index_.contains(id); }

const CameraModel& Rig::camera(int id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::out_of_range("rig: unknown camera id " + std::to_string(id));
  }
  return cameras_[it->second];
}

const Matrix3& Rig::fundamental(int from, int to) const {
  const auto it = fundamentals_.find({from, to});
  if (it == fundamentals_.end()) {
    throw std::out_of_range("rig: no fundamental matrix for camera pair");
  }
  return it->second;
}

}  // namespace gymtrack
