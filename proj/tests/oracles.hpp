#pragma once

// Exhaustive reference implementations used by the unit and acceptance tests.
// Deliberately naive: O(n^2) scans, full sorts, hand-rolled Jacobi sweeps.

#include "hybridreg/kdtree.hpp"
#include "hybridreg/patch_matching.hpp"
#include "hybridreg/point_matching.hpp"
#include "hybridreg/types.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <random>
#include <span>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

using hybridreg::Point3;

inline std::vector<Point3> random_points(std::mt19937_64& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point3> pts(n);
  for (auto& p : pts) p = Point3(u(rng), u(rng), u(rng));
  return pts;
}

// All points with distance < r, ascending by (distance, index).
inline std::vector<hybridreg::Neighbor> radius_scan(std::span<const Point3> pts, const Point3& q, double r,
                                                    bool drop_coincident) {
  std::vector<hybridreg::Neighbor> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double d = (pts[i] - q).norm();
    if (d < r && !(drop_coincident && d == 0.0)) out.push_back({i, d});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.index < b.index;
  });
  return out;
}

// Lowest index among the closest points.
inline std::size_t nearest_scan(std::span<const Point3> pts, const Point3& q) {
  std::size_t best = 0;
  double best_d = (pts[0] - q).squaredNorm();
  for (std::size_t i = 1; i < pts.size(); ++i) {
    double d = (pts[i] - q).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

// Voxel buckets keyed by floor(x / cell); the map orders keys lexicographically.
inline std::map<std::tuple<long, long, long>, std::vector<std::size_t>> voxel_buckets(std::span<const Point3> pts,
                                                                                      double cell) {
  std::map<std::tuple<long, long, long>, std::vector<std::size_t>> buckets;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto k = [&](int a) { return static_cast<long>(std::floor(pts[i][a] / cell)); };
    buckets[{k(0), k(1), k(2)}].push_back(i);
  }
  return buckets;
}

// Cyclic Jacobi eigen-decomposition of a symmetric matrix. Eigenvalues descending,
// eigenvectors in the matching columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a, int sweeps = 100) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double sn = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - sn * aqk;
          a(q, k) = sn * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) > a(y, y); });
  Eigen::VectorXd vals(n);
  Eigen::MatrixXd vecs(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    vals(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    vecs.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return {vals, vecs};
}

// Angle between two directions ignoring sign, radians.
inline double direction_error(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double c = std::abs(a.normalized().dot(b.normalized()));
  return std::acos(std::min(1.0, c));
}

// Full sort of every entry, descending, ties in row-major order.
inline std::vector<hybridreg::PatchMatch> sorted_entries(const Eigen::MatrixXd& c, std::size_t k) {
  std::vector<hybridreg::PatchMatch> all;
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      all.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), c(i, j)});
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.confidence > b.confidence; });
  if (all.size() > k) all.resize(k);
  return all;
}

// Number of entries of the row (or column) strictly larger than the given one.
inline std::vector<hybridreg::PointMatch> mutual_rank_scan(const Eigen::MatrixXd& s, std::size_t k) {
  std::vector<hybridreg::PointMatch> out;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      std::size_t row_rank = 0, col_rank = 0;
      for (Eigen::Index jj = 0; jj < s.cols(); ++jj) row_rank += s(i, jj) > s(i, j);
      for (Eigen::Index ii = 0; ii < s.rows(); ++ii) col_rank += s(ii, j) > s(i, j);
      if (row_rank < k && col_rank < k)
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), s(i, j)});
    }
  }
  return out;
}

// Rotation angle from the axis-angle form: the rotation vector of R, not the trace.
inline double rotation_angle_deg(const Eigen::Matrix3d& r) {
  Eigen::Vector3d w(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1));
  double s = 0.5 * w.norm();
  double c = 0.5 * (r.trace() - 1.0);
  return std::atan2(s, c) * 180.0 / std::numbers::pi;
}

inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Vector4d q(g(rng), g(rng), g(rng), g(rng));
  q.normalize();
  return Eigen::Quaterniond(q(0), q(1), q(2), q(3)).toRotationMatrix();
}

inline hybridreg::RigidTransform random_rigid(std::mt19937_64& rng, double max_t = 1.0) {
  std::uniform_real_distribution<double> u(-max_t, max_t);
  return {random_rotation(rng), Eigen::Vector3d(u(rng), u(rng), u(rng))};
}

}  // namespace oracle
