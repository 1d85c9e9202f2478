#include "hybridreg/errors.hpp"
#include "hybridreg/types.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace hybridreg {

RigidTransform::RigidTransform(const Mat3& rotation, const Vec3& translation)
    : rotation_(rotation), translation_(translation) {}

RigidTransform RigidTransform::from_axis_angle(const Vec3& axis, double angle_rad,
                                               const Vec3& translation) {
  const double n = axis.norm();
  if (n == 0.0) {
    return {Mat3::Identity(), translation};
  }
  return {Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix(), translation};
}

RigidTransform RigidTransform::from_matrix(const Mat4& m, double tol) {
  RigidTransform t(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
  if (!t.is_valid(tol)) {
    throw Error("matrix is not a proper rigid transform");
  }
  // Clean up rounding from text round-trips.
  t.rotation_ = orthonormalize(t.rotation_);
  return t;
}

RigidTransform RigidTransform::inverse() const {
  const Mat3 rt = rotation_.transpose();
  return {rt, -(rt * translation_)};
}

RigidTransform RigidTransform::operator*(const RigidTransform& other) const {
  return {rotation_ * other.rotation_, rotation_ * other.translation_ + translation_};
}

Mat4 RigidTransform::matrix() const {
  Mat4 m = Mat4::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

bool RigidTransform::is_valid(double tol) const {
  if (!rotation_.allFinite() || !translation_.allFinite()) return false;
  const double ortho = (rotation_.transpose() * rotation_ - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(rotation_.determinant() - 1.0) <= tol;
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& transform) {
  PointCloud out;
  out.points.reserve(cloud.points.size());
  for (const auto& p : cloud.points) out.points.push_back(transform.apply(p));
  if (cloud.has_normals()) {
    out.normals.reserve(cloud.normals.size());
    for (const auto& n : cloud.normals) out.normals.push_back(transform.rotate(n));
  }
  return out;
}

Mat3 orthonormalize(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return svd.matrixU() * d * svd.matrixV().transpose();
}

}  // namespace hybridreg
