#include "hybridreg/registration.hpp"

#include "hybridreg/errors.hpp"

#include <Eigen/SVD>

#include <array>
#include <random>

namespace hybridreg {

RigidTransform weighted_svd(std::span<const Correspondence> corrs) {
  if (corrs.size() < 3) throw DegenerateError("weighted_svd: need at least 3 correspondences");
  double wsum = 0.0;
  Point3 cs = Point3::Zero();
  Point3 ct = Point3::Zero();
  for (const auto& c : corrs) {
    if (c.weight < 0) throw DegenerateError("weighted_svd: negative weight");
    wsum += c.weight;
    cs += c.weight * c.source;
    ct += c.weight * c.target;
  }
  if (!(wsum > 0)) throw DegenerateError("weighted_svd: total weight is zero");
  cs /= wsum;
  ct /= wsum;

  Mat3 h = Mat3::Zero();
  for (const auto& c : corrs) h.noalias() += c.weight * (c.source - cs) * (c.target - ct).transpose();

  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (!(sv[0] > 0) || sv[1] <= 1e-12 * sv[0]) {
    throw DegenerateError("weighted_svd: collinear or coincident configuration");
  }
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0) d(2, 2) = -1.0;
  const Mat3 r = v * d * u.transpose();
  return {r, ct - r * cs};
}

std::vector<std::size_t> inliers_within(const RigidTransform& t, std::span<const Correspondence> corrs,
                                        double radius) {
  std::vector<std::size_t> out;
  const double r2 = radius * radius;
  for (std::size_t i = 0; i < corrs.size(); ++i) {
    if ((t.apply(corrs[i].source) - corrs[i].target).squaredNorm() < r2) out.push_back(i);
  }
  return out;
}

namespace {

double mean_residual(const RigidTransform& t, std::span<const Correspondence> corrs,
                     const std::vector<std::size_t>& ids) {
  if (ids.empty()) return 0.0;
  double sum = 0.0;
  for (auto i : ids) sum += (t.apply(corrs[i].source) - corrs[i].target).norm();
  return sum / static_cast<double>(ids.size());
}

std::vector<Correspondence> gather(std::span<const Correspondence> corrs, const std::vector<std::size_t>& ids) {
  std::vector<Correspondence> out;
  out.reserve(ids.size());
  for (auto i : ids) out.push_back(corrs[i]);
  return out;
}

// Refit on inliers while the inlier count does not decrease.
void refine(RegistrationResult& res, std::span<const Correspondence> all, double radius, int iters) {
  for (int it = 0; it < iters; ++it) {
    RigidTransform next;
    try {
      next = weighted_svd(gather(all, res.inliers));
    } catch (const DegenerateError&) {
      break;
    }
    auto next_inliers = inliers_within(next, all, radius);
    if (next_inliers.size() < res.inliers.size()) break;
    const bool unchanged = next_inliers == res.inliers;
    res.transform = next;
    res.inliers = std::move(next_inliers);
    if (unchanged) break;
  }
}

}  // namespace

RegistrationResult lgr(std::span<const std::vector<Correspondence>> per_patch, double accept_radius,
                       int refine_iters) {
  std::vector<Correspondence> all;
  for (const auto& p : per_patch) all.insert(all.end(), p.begin(), p.end());

  RegistrationResult res;
  for (std::size_t p = 0; p < per_patch.size(); ++p) {
    if (per_patch[p].size() < 3) continue;
    try {
      res.candidates.push_back({weighted_svd(per_patch[p]), 0, p});
    } catch (const DegenerateError&) {
    }
  }
  if (res.candidates.empty()) throw RegistrationFailure("lgr: no patch produced a transform hypothesis");

  // A patch spans only a few centimetres, so its own fit is rarely accurate enough to collect
  // the global consensus. Each candidate is therefore refined against all correspondences
  // before the candidates are compared.
  std::vector<RegistrationResult> refined(res.candidates.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(res.candidates.size()); ++k) {
    auto& r = refined[static_cast<std::size_t>(k)];
    r.transform = res.candidates[static_cast<std::size_t>(k)].transform;
    r.inliers = inliers_within(r.transform, all, accept_radius);
    refine(r, all, accept_radius, refine_iters);
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < res.candidates.size(); ++k) {
    res.candidates[k].inlier_count = refined[k].inliers.size();
    if (refined[k].inliers.size() > refined[best].inliers.size()) best = k;
  }
  res.transform = refined[best].transform;
  res.inliers = std::move(refined[best].inliers);
  res.selected_patch = res.candidates[best].patch;
  res.mean_residual = mean_residual(res.transform, all, res.inliers);
  return res;
}

RegistrationResult ransac(std::span<const Correspondence> corrs, int iterations, double threshold,
                          std::uint64_t seed) {
  if (corrs.size() < 3) throw RegistrationFailure("ransac: need at least 3 correspondences");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, corrs.size() - 1);

  RegistrationResult res;
  std::size_t best_count = 0;
  for (int it = 0; it < iterations; ++it) {
    std::array<std::size_t, 3> s{pick(rng), pick(rng), pick(rng)};
    if (s[0] == s[1] || s[0] == s[2] || s[1] == s[2]) continue;
    const std::array<Correspondence, 3> sample{corrs[s[0]], corrs[s[1]], corrs[s[2]]};
    RigidTransform t;
    try {
      t = weighted_svd(sample);
    } catch (const DegenerateError&) {
      continue;
    }
    auto inl = inliers_within(t, corrs, threshold);
    if (inl.size() > best_count) {
      best_count = inl.size();
      res.transform = t;
      res.inliers = std::move(inl);
    }
  }
  if (best_count < 3) throw RegistrationFailure("ransac: no hypothesis reached 3 inliers");
  refine(res, corrs, threshold, 10);
  res.mean_residual = mean_residual(res.transform, corrs, res.inliers);
  return res;
}

}  // namespace hybridreg
