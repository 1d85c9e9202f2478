#pragma once

#include "hybridreg/registration.hpp"
#include "hybridreg/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hybridreg {

struct InlierRatio {
  double value = 0.0;
  bool empty = false;  // no correspondences were given
};

// Fraction of correspondences with |T_gt p - q| < tau.
InlierRatio inlier_ratio(std::span<const Correspondence> corrs, const RigidTransform& t_gt, double tau = 0.1);

// Fraction of pairs whose inlier ratio exceeds tau_ir.
double fmr(std::span<const double> pair_irs, double tau_ir = 0.05);

// Rotation error in degrees and translation error in meters.
std::pair<double, double> rre_rte(const RigidTransform& t_est, const RigidTransform& t_gt);

// Mutual nearest neighbours between t_gt(source) and target closer than `radius`.
std::vector<std::pair<std::size_t, std::size_t>> gt_correspondences(const PointCloud& source,
                                                                    const PointCloud& target,
                                                                    const RigidTransform& t_gt, double radius);

// sqrt(mean |T_est p - q|^2) over the given index pairs; +inf when there are none.
double rmse(const RigidTransform& t_est, const PointCloud& source, const PointCloud& target,
            std::span<const std::pair<std::size_t, std::size_t>> pairs);

struct PairEvaluation {
  std::string name;
  bool registered = false;  // false when the estimator raised a registration failure
  double ir = 0.0;
  bool ir_empty = true;
  double rre = 180.0;  // failed registrations keep 180 and infinite rte / rmse
  double rte = 0.0;
  double rmse = 0.0;
  bool fmr_success = false;
  bool rr_success = false;
  std::size_t correspondences = 0;
};

double registration_recall(std::span<const PairEvaluation> evals, double rmse_thresh = 0.2);

struct BenchmarkSummary {
  std::size_t pairs = 0;
  std::size_t successes = 0;
  double rr = 0.0;
  double fmr = 0.0;
  double mean_ir = 0.0;
  double median_rre = 0.0;  // over RR successes; NaN when there are none
  double median_rte = 0.0;
  std::vector<PairEvaluation> records;
};

// Aggregates are computed only from the records' fields.
BenchmarkSummary summarize(std::vector<PairEvaluation> records);

double median(std::vector<double> values);

}  // namespace hybridreg
