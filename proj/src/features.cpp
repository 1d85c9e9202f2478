#include "hybridreg/features.hpp"

#include "hybridreg/cloud_io.hpp"
#include "hybridreg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace hybridreg {

FeatureSet FeatureSet::subset(std::span<const std::size_t> ids) const {
  FeatureSet out;
  out.values.resize(static_cast<Eigen::Index>(ids.size()), values.cols());
  out.degenerate.resize(ids.size(), 0);
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out.values.row(static_cast<Eigen::Index>(k)) = values.row(static_cast<Eigen::Index>(ids[k]));
    if (ids[k] < degenerate.size()) out.degenerate[k] = degenerate[ids[k]];
  }
  return out;
}

NormalEstimate estimate_normals(const PointCloud& cloud, double radius) {
  if (!(radius > 0)) throw ConfigError("normal radius must be positive");
  NormalEstimate est;
  est.cloud.points = cloud.points;
  est.cloud.normals.assign(cloud.size(), Vec3::UnitZ());
  est.degenerate.assign(cloud.size(), 0);
  const KdTree index(cloud);

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(cloud.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto& p = cloud.points[i];
    const auto nbrs = radius_neighbors(index, p, radius, false);
    if (nbrs.size() < 3) {
      est.degenerate[i] = 1;
      continue;
    }
    Point3 mean = p;
    for (const auto& n : nbrs) mean += index.point(n.index);
    mean /= static_cast<double>(nbrs.size() + 1);
    Mat3 cov = (p - mean) * (p - mean).transpose();
    for (const auto& n : nbrs) {
      const Vec3 d = index.point(n.index) - mean;
      cov.noalias() += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
    Vec3 normal = eig.eigenvectors().col(0).normalized();
    constexpr double tie = 1e-12;
    const bool flip = normal.z() < -tie ||
                      (std::abs(normal.z()) <= tie &&
                       (normal.x() < -tie || (std::abs(normal.x()) <= tie && normal.y() < 0)));
    est.cloud.normals[i] = flip ? Vec3(-normal) : normal;
  }
  return est;
}

DescriptorEstimator::DescriptorEstimator(const PointCloud& cloud, double radius, int bins)
    : cloud_(cloud), index_(cloud), radius_(radius), bins_(bins) {
  if (!cloud.has_normals()) throw Error("descriptor estimation requires normals");
  if (!(radius > 0)) throw ConfigError("features.radius must be positive");
  if (bins < 1) throw ConfigError("features.bins must be at least 1");
}

Eigen::VectorXd DescriptorEstimator::pair_histogram(std::size_t center, std::span<const Neighbor> nbrs) const {
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(3 * bins_);
  if (nbrs.empty()) return hist;
  const Point3& ps = cloud_.points[center];
  const Vec3& u = cloud_.normals[center];
  auto bin = [&](double value, double range) {
    const int b = static_cast<int>(std::floor(value / range * bins_));
    return std::clamp(b, 0, bins_ - 1);
  };
  for (const auto& n : nbrs) {
    const Vec3& nt = cloud_.normals[n.index];
    const Vec3 dir = (cloud_.points[n.index] - ps) / n.distance;
    const double f1 = std::abs(u.dot(dir));
    Vec3 v = u.cross(dir);
    const double vn = v.norm();
    double f2 = 0.0;
    double f3 = 0.0;
    const double un = std::abs(u.dot(nt));
    if (vn > 1e-12) {
      v /= vn;
      const Vec3 w = u.cross(v);
      f2 = std::abs(v.dot(nt));
      f3 = std::atan2(std::abs(w.dot(nt)), un);
    } else {
      // Neighbor along the normal: the Darboux frame is undefined, keep only the normal angle.
      f3 = std::acos(std::min(un, 1.0));
    }
    hist[bin(f1, 1.0)] += 1.0;
    hist[bins_ + bin(f2, 1.0)] += 1.0;
    hist[2 * bins_ + bin(f3, std::numbers::pi / 2)] += 1.0;
  }
  return hist / static_cast<double>(nbrs.size());
}

template <typename HistOf>
std::pair<Descriptor, bool> DescriptorEstimator::finish(std::span<const Neighbor> nbrs, const Eigen::VectorXd& own,
                                                        HistOf hist_of) const {
  if (nbrs.empty()) {
    return {Descriptor::Constant(3 * bins_, 1.0 / std::sqrt(3.0 * bins_)), true};
  }
  Eigen::VectorXd h = own;
  Eigen::VectorXd blend = Eigen::VectorXd::Zero(3 * bins_);
  for (std::size_t k = 0; k < nbrs.size(); ++k) {
    blend += hist_of(k) * (radius_ / nbrs[k].distance);
  }
  h += blend / static_cast<double>(nbrs.size());
  h /= h.sum();
  h.normalize();
  return {h, false};
}

std::pair<Descriptor, bool> DescriptorEstimator::describe(std::size_t point_id) const {
  const auto nbrs = radius_neighbors(index_, cloud_.points.at(point_id), radius_);
  const auto own = pair_histogram(point_id, nbrs);
  std::vector<Eigen::VectorXd> hists;
  hists.reserve(nbrs.size());
  for (const auto& n : nbrs) {
    hists.push_back(pair_histogram(n.index, radius_neighbors(index_, cloud_.points[n.index], radius_)));
  }
  return finish(nbrs, own, [&](std::size_t k) -> const Eigen::VectorXd& { return hists[k]; });
}

FeatureSet DescriptorEstimator::describe_all() const {
  const auto n = cloud_.size();
  std::vector<std::vector<Neighbor>> nbrs(n);
  std::vector<Eigen::VectorXd> spfh(n);

#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    // Histograms do not depend on neighbor order, so skip the sort.
    nbrs[i] = radius_neighbors(index_, cloud_.points[i], radius_, false);
    spfh[i] = pair_histogram(i, nbrs[i]);
  }

  FeatureSet out;
  out.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim()));
  out.degenerate.assign(n, 0);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto& nb = nbrs[i];
    auto [d, degenerate] =
        finish(nb, spfh[i], [&](std::size_t k) -> const Eigen::VectorXd& { return spfh[nb[k].index]; });
    out.values.row(ii) = d.transpose();
    out.degenerate[i] = degenerate ? 1 : 0;
  }
  return out;
}

Descriptor point_descriptor(const PointCloud& cloud, std::size_t point_id, double radius, int bins) {
  return DescriptorEstimator(cloud, radius, bins).describe(point_id).first;
}

Descriptor node_descriptor(std::span<const Descriptor> members) {
  if (members.empty()) throw EmptyInputError("node_descriptor: empty patch");
  Descriptor sum = Descriptor::Zero(members.front().size());
  for (const auto& m : members) sum += m;
  const double n = sum.norm();
  if (!(n > 0)) throw DegenerateError("node_descriptor: members cancel to zero");
  return sum / n;
}

Descriptor node_descriptor(const FeatureSet& features, std::span<const std::size_t> members) {
  if (members.empty()) throw EmptyInputError("node_descriptor: empty patch");
  Descriptor sum = Descriptor::Zero(static_cast<Eigen::Index>(features.dim()));
  for (auto id : members) sum += features.values.row(static_cast<Eigen::Index>(id)).transpose();
  const double n = sum.norm();
  if (!(n > 0)) throw DegenerateError("node_descriptor: members cancel to zero");
  return sum / n;
}

namespace {

// Square root, then drop the shared all-ones component and rescale. Zero when nothing is left.
Eigen::RowVectorXd centered(const Eigen::RowVectorXd& hist) {
  Eigen::RowVectorXd h = hist.cwiseMax(0.0).cwiseSqrt();
  h.array() -= h.mean();
  const double n = h.norm();
  return n > 1e-12 ? Eigen::RowVectorXd(h / n) : Eigen::RowVectorXd(Eigen::RowVectorXd::Zero(h.size()));
}

}  // namespace

FeatureSet matching_features(const PointCloud& dense, const PointCloud& coarse, const FeatureConfig& cfg) {
  const FeatureSet fine = DescriptorEstimator(dense, cfg.radius, cfg.bins).describe_all();
  const auto n = dense.size();
  const bool with_context = cfg.context_radius > 0;
  FeatureSet context;
  std::vector<std::size_t> nearest(n, 0);
  bool with_context_rows = with_context;  // false when no coarse point has a normal
  if (with_context) {
    if (coarse.empty()) throw EmptyInputError("matching_features: empty coarse level");
    // Coarse points without a usable normal are left out: their placeholder normal would not
    // move with the cloud.
    const auto est = estimate_normals(coarse, cfg.context_normal_radius);
    PointCloud support;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      if (est.degenerate[j]) continue;
      support.points.push_back(est.cloud.points[j]);
      support.normals.push_back(est.cloud.normals[j]);
    }
    if (support.empty()) {
      with_context_rows = false;
    } else {
      context = DescriptorEstimator(support, cfg.context_radius, cfg.bins).describe_all();
      const KdTree index(support);
      for (std::size_t i = 0; i < n; ++i) nearest[i] = index.nearest(dense.points[i]).index;
    }
  }

  FeatureSet out;
  const Eigen::Index d = fine.values.cols();
  out.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), with_context ? 2 * d : d);
  out.degenerate.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    auto row = out.values.row(r);
    row.head(d) = centered(fine.values.row(r));
    if (with_context_rows) row.tail(d) = centered(context.values.row(static_cast<Eigen::Index>(nearest[i])));
    const double norm = row.norm();
    if (norm > 0) {
      row /= norm;
    } else {
      out.degenerate[i] = 1;
    }
  }
  return out;
}

void write_features(const FeatureSet& features, std::ostream& out) {
  for (Eigen::Index i = 0; i < features.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < features.values.cols(); ++j) {
      out << (j ? " " : "") << format_double(features.values(i, j));
    }
    out << '\n';
  }
}

}  // namespace hybridreg
