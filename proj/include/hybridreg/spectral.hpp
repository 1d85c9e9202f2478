#pragma once

#include "hybridreg/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace hybridreg {

struct SpectralConfig {
  double tau = 0.1;           // length-consistency tolerance
  std::size_t min_cluster = 3;
  double tol = 1e-8;
  int max_iters = 1000;
};

// Pairwise length-consistency affinities between correspondences (src[i], tgt[i]):
// max(0, 1 - delta^2 / tau^2) with delta = | |s_a - s_b| - |t_a - t_b| |, zero diagonal.
// When ids are supplied, two correspondences sharing a source id or a target id get 0.
Eigen::MatrixXd compatibility(std::span<const Point3> src, std::span<const Point3> tgt, double tau,
                              std::span<const std::size_t> src_ids = {},
                              std::span<const std::size_t> tgt_ids = {});

struct PrincipalEigen {
  Eigen::VectorXd vector;  // unit norm, non-negative for non-negative input
  double eigenvalue = 0.0;
  bool zero_matrix = false;  // M x vanished; `vector` is the uniform start
  bool converged = false;
  int iterations = 0;
};

// Power iteration from the uniform vector until |Mx - lambda x| <= tol * lambda.
PrincipalEigen principal_eigenvector(const Eigen::MatrixXd& m, double tol = 1e-8, int max_iters = 1000);

struct ClusterResult {
  std::vector<std::size_t> kept;  // ascending
  Eigen::VectorXd eigvec;
};

// Repeatedly accepts the largest remaining eigenvector entry and drops every remaining
// candidate with zero affinity to it. Stops when the largest remaining entry is 0 or when
// accepted + remaining candidates shrink to `min_cluster`, in which case the remaining
// candidates are kept as well. Equal entries resolve to the lowest index.
ClusterResult greedy_main_cluster(const Eigen::MatrixXd& m, const Eigen::VectorXd& eigvec, std::size_t min_cluster);

// compatibility -> principal_eigenvector -> greedy_main_cluster.
ClusterResult spectral_filter(std::span<const Point3> src, std::span<const Point3> tgt, const SpectralConfig& cfg,
                              std::span<const std::size_t> src_ids = {},
                              std::span<const std::size_t> tgt_ids = {});

}  // namespace hybridreg
