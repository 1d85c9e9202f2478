#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <vector>

namespace hybridreg {

using Point3 = Eigen::Vector3d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;

/// Positions of one scan fragment, with optional per-point unit normals.
///
/// `normals` is either empty or exactly as long as `points`.
struct PointCloud {
  std::vector<Point3> points;
  std::vector<Vec3> normals;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  bool has_normals() const { return !points.empty() && normals.size() == points.size(); }
};

/// Proper rigid motion x -> R x + t.
class RigidTransform {
 public:
  RigidTransform() = default;
  RigidTransform(const Mat3& rotation, const Vec3& translation);

  static RigidTransform identity() { return {}; }
  static RigidTransform from_axis_angle(const Vec3& axis, double angle_rad, const Vec3& translation);
  // Throws hybridreg::Error if the 3x3 block is not a rotation within `tol`.
  static RigidTransform from_matrix(const Mat4& m, double tol = 1e-6);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Point3 apply(const Point3& p) const { return rotation_ * p + translation_; }
  Vec3 rotate(const Vec3& v) const { return rotation_ * v; }

  RigidTransform inverse() const;
  // (a * b)(x) == a(b(x))
  RigidTransform operator*(const RigidTransform& other) const;

  Mat4 matrix() const;

  bool is_valid(double tol = 1e-9) const;

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& transform);

// Nearest rotation matrix (SVD projection onto SO(3)).
Mat3 orthonormalize(const Mat3& m);

}  // namespace hybridreg
