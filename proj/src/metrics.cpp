#include "hybridreg/metrics.hpp"

#include "hybridreg/errors.hpp"
#include "hybridreg/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hybridreg {

InlierRatio inlier_ratio(std::span<const Correspondence> corrs, const RigidTransform& t_gt, double tau) {
  if (!(tau > 0)) throw Error("inlier threshold must be positive");
  if (corrs.empty()) return {0.0, true};
  std::size_t hits = 0;
  for (const auto& c : corrs) hits += (t_gt.apply(c.source) - c.target).norm() < tau ? 1 : 0;
  return {static_cast<double>(hits) / static_cast<double>(corrs.size()), false};
}

double fmr(std::span<const double> pair_irs, double tau_ir) {
  if (pair_irs.empty()) return 0.0;
  const auto n = std::count_if(pair_irs.begin(), pair_irs.end(), [&](double ir) { return ir > tau_ir; });
  return static_cast<double>(n) / static_cast<double>(pair_irs.size());
}

std::pair<double, double> rre_rte(const RigidTransform& t_est, const RigidTransform& t_gt) {
  // Same angle as arccos((tr - 1) / 2), but atan2 keeps its precision near 0 and 180 degrees
  // where arccos loses about half the digits.
  const Mat3 r = t_gt.rotation().transpose() * t_est.rotation();
  const double c = (r.trace() - 1.0) / 2.0;
  const double s = 0.5 * Vec3(r(2, 1) - r(1, 2), r(0, 2) - r(2, 0), r(1, 0) - r(0, 1)).norm();
  const double rre = std::atan2(s, c) * 180.0 / std::numbers::pi;
  return {rre, (t_est.translation() - t_gt.translation()).norm()};
}

std::vector<std::pair<std::size_t, std::size_t>> gt_correspondences(const PointCloud& source,
                                                                    const PointCloud& target,
                                                                    const RigidTransform& t_gt, double radius) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (source.empty() || target.empty()) return out;
  const PointCloud moved = apply_transform(source, t_gt);
  const KdTree src_tree(moved);
  const KdTree tgt_tree(target);
  for (std::size_t i = 0; i < moved.size(); ++i) {
    const auto fwd = tgt_tree.nearest(moved.points[i]);
    if (!(fwd.distance < radius)) continue;
    if (src_tree.nearest(target.points[fwd.index]).index == i) out.emplace_back(i, fwd.index);
  }
  return out;
}

double rmse(const RigidTransform& t_est, const PointCloud& source, const PointCloud& target,
            std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (pairs.empty()) return std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for (const auto& [i, j] : pairs) sum += (t_est.apply(source.points[i]) - target.points[j]).squaredNorm();
  return std::sqrt(sum / static_cast<double>(pairs.size()));
}

double registration_recall(std::span<const PairEvaluation> evals, double rmse_thresh) {
  if (evals.empty()) return 0.0;
  const auto n = std::count_if(evals.begin(), evals.end(),
                               [&](const PairEvaluation& e) { return e.registered && e.rmse < rmse_thresh; });
  return static_cast<double>(n) / static_cast<double>(evals.size());
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchmarkSummary summarize(std::vector<PairEvaluation> records) {
  BenchmarkSummary s;
  s.pairs = records.size();
  std::vector<double> rre, rte;
  double ir_sum = 0.0;
  std::size_t fmr_hits = 0;
  for (const auto& r : records) {
    ir_sum += r.ir;
    fmr_hits += r.fmr_success ? 1 : 0;
    if (r.rr_success) {
      ++s.successes;
      rre.push_back(r.rre);
      rte.push_back(r.rte);
    }
  }
  if (s.pairs > 0) {
    const auto n = static_cast<double>(s.pairs);
    s.rr = static_cast<double>(s.successes) / n;
    s.fmr = static_cast<double>(fmr_hits) / n;
    s.mean_ir = ir_sum / n;
  }
  s.median_rre = median(rre);
  s.median_rte = median(rte);
  s.records = std::move(records);
  return s;
}

}  // namespace hybridreg
