#pragma once

#include "hybridreg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hybridreg {

struct Correspondence {
  Point3 source = Point3::Zero();
  Point3 target = Point3::Zero();
  double weight = 1.0;
};

// Weighted least-squares rigid fit minimizing sum w |R s + t - q|^2, with the reflection
// case folded back to det(R) = +1. Throws DegenerateError for fewer than 3
// correspondences, non-positive total weight, or a cross-covariance of rank < 2.
RigidTransform weighted_svd(std::span<const Correspondence> corrs);

struct TransformCandidate {
  RigidTransform transform;
  std::size_t inlier_count = 0;  // global inliers after the candidate's refinement
  std::size_t patch = 0;         // transform is the patch's own fit, before refinement
};

struct RegistrationResult {
  RigidTransform transform;
  std::vector<std::size_t> inliers;  // indices into the flattened correspondence list
  double mean_residual = 0.0;
  std::vector<TransformCandidate> candidates;  // LGR only; in patch order
  std::size_t selected_patch = 0;
};

// Residual |T s - q| of every correspondence below `radius`.
std::vector<std::size_t> inliers_within(const RigidTransform& t, std::span<const Correspondence> corrs,
                                        double radius);

// Local-to-global registration: one weighted fit per patch list (lists with fewer than 3
// correspondences or degenerate geometry are skipped). Every hypothesis is refit on its
// global inliers under `accept_radius` for up to `refine_iters` rounds while the inlier
// count does not drop; the one ending with the most inliers wins (earliest patch on ties).
// Throws RegistrationFailure when no patch yields a hypothesis.
RegistrationResult lgr(std::span<const std::vector<Correspondence>> per_patch, double accept_radius,
                       int refine_iters);

// Seeded 3-point RANSAC with a final refit on the inliers. Throws RegistrationFailure
// for fewer than 3 correspondences or when no sample reaches 3 inliers.
RegistrationResult ransac(std::span<const Correspondence> corrs, int iterations, double threshold,
                          std::uint64_t seed);

}  // namespace hybridreg
