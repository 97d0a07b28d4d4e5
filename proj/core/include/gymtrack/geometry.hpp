#pragma once

#include <Eigen/Core>

#include <cmath>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gymtrack {

// World frame is right-handed with z pointing up; distances are meters.
// Image frame has its origin at the top-left pixel, x to the right, y down.
using Point2 = Eigen::Vector2d;
using Point3 = Eigen::Vector3d;
using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix34 = Eigen::Matrix<double, 3, 4>;

enum class GeometryErrc {
  InvalidCamera,
  InvalidPlane,
  DegenerateDepth,
  CoincidentCenters,
  DegenerateLine,
  InsufficientViews,
  IllConditioned,
  RayParallelToPlane,
  BehindCamera,
};

const char* to_string(GeometryErrc code);

class GeometryError : public std::runtime_error {
 public:
  GeometryError(GeometryErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  GeometryErrc code() const noexcept { return code_; }

 private:
  GeometryErrc code_;
};

/// A calibrated pinhole view. R and t map world points into the camera
/// frame (x_cam = R * X + t); the camera looks along its +z axis.
class CameraModel {
 public:
  /// Throws GeometryError(InvalidCamera) when K or R violate the pinhole
  /// invariants (positive focal lengths, upper-triangular K with K(2,2)=1,
  /// orthonormal R with det +1).
  CameraModel(int id, const Matrix3& K, const Matrix3& R, const Vector3& t);

  /// Camera at `eye` whose principal axis passes through `target`.
  static CameraModel look_at(int id, const Matrix3& K, const Point3& eye,
                             const Point3& target,
                             const Vector3& up = Vector3::UnitZ());

  int id() const noexcept { return id_; }
  const Matrix3& K() const noexcept { return K_; }
  const Matrix3& R() const noexcept { return R_; }
  const Vector3& t() const noexcept { return t_; }
  const Matrix34& P() const noexcept { return P_; }
  const Point3& center() const noexcept { return center_; }
  const Matrix3& K_inverse() const noexcept { return K_inv_; }

  /// Signed depth of X along the principal axis.
  double depth(const Point3& X) const { return R_.row(2).dot(X) + t_.z(); }

 private:
  int id_;
  Matrix3 K_;
  Matrix3 R_;
  Vector3 t_;
  Matrix34 P_;
  Point3 center_;
  Matrix3 K_inv_;
};

struct PlaneSpec {
  Vector3 normal{1.0, 0.0, 0.0};
  Point3 point{0.0, 0.0, 0.0};

  /// Throws GeometryError(InvalidPlane) unless the normal is unit length.
  void validate() const;
  bool is_vertical(double tolerance = 1e-9) const {
    return std::abs(normal.z()) < tolerance;
  }
  double signed_distance(const Point3& X) const {
    return normal.dot(X - point);
  }
};

/// Homogeneous image line l1*x + l2*y + l3 = 0.
struct EpipolarLine {
  double l1 = 0.0;
  double l2 = 0.0;
  double l3 = 0.0;
};

Point2 project(const CameraModel& cam, const Point3& X);

/// F such that x_to^T * F * x_from = 0 for corresponding pixels. Scaled so
/// that its largest-magnitude entry equals exactly +1.
Matrix3 fundamental_matrix(const CameraModel& from, const CameraModel& to);

EpipolarLine epipolar_line(const Matrix3& F, const Point2& source);
double point_line_distance(const Point2& p, const EpipolarLine& line);

/// Distance of `target` to the epipolar line of `source`, divided by the
/// target box scale |w + h|.
double epipolar_point_distance(const Matrix3& F, const Point2& source,
                               const Point2& target, double target_scale);

struct Observation {
  std::reference_wrapper<const CameraModel> camera;
  Point2 pixel;
};

/// Linear (DLT) triangulation followed by one Gauss-Newton step on the
/// summed squared reprojection error.
Point3 triangulate(std::span<const Observation> observations);

/// Unit direction, in world coordinates, of the ray through pixel p.
Vector3 pixel_ray_world(const CameraModel& cam, const Point2& p);

/// Angle in degrees between the viewing rays of two pixels.
double ray_angle_deg(const CameraModel& a, const Point2& pa,
                     const CameraModel& b, const Point2& pb);

Point3 ray_plane_intersect(const CameraModel& cam, const Point2& p,
                           const PlaneSpec& plane);

/// A set of cameras addressed by id, with cached pairwise fundamental
/// matrices.
class Rig {
 public:
  Rig() = default;
  explicit Rig(std::vector<CameraModel> cameras);

  const std::vector<CameraModel>& cameras() const noexcept { return cameras_; }
  std::size_t size() const noexcept { return cameras_.size(); }
  bool contains(int id) const;
  const CameraModel& camera(int id) const;

  /// F mapping pixels of camera `from` to epipolar lines in camera `to`.
  const Matrix3& fundamental(int from, int to) const;

 private:
  std::vector<CameraModel> cameras_;
  std::map<int, std::size_t> index_;
  std::map<std::pair<int, int>, Matrix3> fundamentals_;
};

}  // namespace gymtrack
