#include "hybridreg/sampler.hpp"

#include "hybridreg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>

namespace hybridreg {

void SamplerConfig::validate() const {
  if (!(r > 0) || !(nms_radius > 0) || !(sigma > 0)) throw ConfigError("sampler lengths must be positive");
  if (!(gamma1 > 0 && gamma1 <= 1) || !(gamma2 > 0 && gamma2 <= 1)) {
    throw ConfigError("sampler.gamma1 and sampler.gamma2 must lie in (0, 1]");
  }
  if (min_neighbors < 0) throw ConfigError("sampler.min_neighbors must be non-negative");
}

std::vector<Point3> HybridNodes::all() const {
  std::vector<Point3> out(salient);
  out.insert(out.end(), non_salient.begin(), non_salient.end());
  return out;
}

std::vector<NodeClass> HybridNodes::labels() const {
  std::vector<NodeClass> out(salient.size(), NodeClass::Salient);
  out.resize(size(), NodeClass::NonSalient);
  return out;
}

HybridNodes HybridNodes::single_class(std::span<const Point3> points, NodeClass cls) {
  HybridNodes nodes;
  auto& pos = cls == NodeClass::Salient ? nodes.salient : nodes.non_salient;
  auto& ids = cls == NodeClass::Salient ? nodes.salient_ids : nodes.non_salient_ids;
  pos.assign(points.begin(), points.end());
  for (std::size_t i = 0; i < points.size(); ++i) ids.push_back(i);
  return nodes;
}

bool passes_ratio_test(const Vec3& eig, double gamma1, double gamma2) {
  const double l1 = eig[0], l2 = eig[1], l3 = eig[2];
  if (!(l1 > 0.0)) return false;
  if (l2 / l1 > gamma1) return false;
  // lambda2 vanishing relative to lambda1: needle-like support, the second ratio is taken as 0.
  if (l2 <= 1e-12 * l1) return true;
  return l3 / l2 <= gamma2;
}

Mat3 weighted_covariance(const Point3& center, std::span<const Point3> neighbors) {
  Mat3 cov = Mat3::Zero();
  double wsum = 0.0;
  for (const auto& q : neighbors) {
    const Vec3 d = center - q;
    const double dist = d.norm();
    if (dist == 0.0) continue;
    const double w = 1.0 / dist;
    cov.noalias() += w * d * d.transpose();
    wsum += w;
  }
  return wsum > 0.0 ? Mat3(cov / wsum) : Mat3::Zero();
}

std::vector<SaliencyRecord> iss_saliency(const PointCloud& p2, const KdTree& index, const SamplerConfig& cfg) {
  cfg.validate();
  if (p2.empty()) throw EmptyInputError("iss_saliency: empty cloud");
  std::vector<SaliencyRecord> records(p2.size());

#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(p2.size()); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto& p = p2.points[i];
    const auto nbrs = radius_neighbors(index, p, cfg.r);
    std::vector<Point3> pts;
    pts.reserve(nbrs.size());
    for (const auto& n : nbrs) pts.push_back(index.point(n.index));

    SaliencyRecord rec;
    rec.point_id = i;
    rec.neighbor_count = nbrs.size();
    const Mat3 cov = weighted_covariance(p, pts);
    Eigen::SelfAdjointEigenSolver<Mat3> eig(cov, Eigen::EigenvaluesOnly);
    // Eigen returns ascending order.
    Vec3 asc = eig.eigenvalues().cwiseMax(0.0);
    // Round-off leaves ~1e-16 relative residue in the flat directions, which would make the
    // NMS order of planar points depend on the frame.
    for (int k = 0; k < 2; ++k) {
      if (asc[k] <= 1e-10 * asc[2]) asc[k] = 0.0;
    }
    rec.eigenvalues = Vec3(asc[2], asc[1], asc[0]);
    rec.v = rec.eigenvalues[2];
    rec.passes_ratio_test = static_cast<int>(nbrs.size()) >= cfg.min_neighbors &&
                            passes_ratio_test(rec.eigenvalues, cfg.gamma1, cfg.gamma2);
    records[i] = rec;
  }
  return records;
}

std::vector<std::size_t> nms(std::span<const SaliencyRecord> records, const PointCloud& p2, double nms_radius) {
  std::vector<const SaliencyRecord*> cands;
  for (const auto& r : records) {
    if (r.passes_ratio_test) cands.push_back(&r);
  }
  std::sort(cands.begin(), cands.end(), [](const SaliencyRecord* a, const SaliencyRecord* b) {
    return a->v > b->v || (a->v == b->v && a->point_id < b->point_id);
  });
  if (cands.empty()) return {};

  std::vector<Point3> pts;
  pts.reserve(cands.size());
  for (const auto* c : cands) pts.push_back(p2.points.at(c->point_id));
  const KdTree tree(pts);
  std::vector<char> accepted(cands.size(), 0);
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    bool suppressed = false;
    for (const auto& n : tree.radius(pts[k], nms_radius)) {
      if (accepted[n.index]) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      accepted[k] = 1;
      out.push_back(cands[k]->point_id);
    }
  }
  return out;
}

std::vector<std::size_t> select_non_salient_ids(const PointCloud& p3, std::span<const Point3> salient, double sigma) {
  if (!(sigma > 0)) throw ConfigError("sigma must be positive");
  std::vector<std::size_t> out;
  if (salient.empty()) {
    out.resize(p3.size());
    for (std::size_t i = 0; i < p3.size(); ++i) out[i] = i;
    return out;
  }
  const KdTree tree(salient);
  for (std::size_t i = 0; i < p3.size(); ++i) {
    if (tree.nearest(p3.points[i]).distance > sigma) out.push_back(i);
  }
  return out;
}

std::vector<Point3> select_non_salient(const PointCloud& p3, std::span<const Point3> salient, double sigma) {
  std::vector<Point3> out;
  for (auto i : select_non_salient_ids(p3, salient, sigma)) out.push_back(p3.points[i]);
  return out;
}

std::vector<std::size_t> salient_points(const PointCloud& p2, const SamplerConfig& cfg) {
  const KdTree index(p2);
  const auto records = iss_saliency(p2, index, cfg);
  return nms(records, p2, cfg.nms_radius);
}

HybridNodes hybrid_points(const PointCloud& p2, const PointCloud& p3, const SamplerConfig& cfg) {
  if (p2.empty() || p3.empty()) throw EmptyInputError("hybrid_points: empty input level");
  HybridNodes nodes;
  nodes.salient_ids = salient_points(p2, cfg);
  for (auto id : nodes.salient_ids) nodes.salient.push_back(p2.points[id]);
  nodes.non_salient_ids = select_non_salient_ids(p3, nodes.salient, cfg.sigma);
  for (auto id : nodes.non_salient_ids) nodes.non_salient.push_back(p3.points[id]);
  return nodes;
}

}  // namespace hybridreg
