#include "hybridreg/spectral.hpp"

#include "hybridreg/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hybridreg {

Eigen::MatrixXd compatibility(std::span<const Point3> src, std::span<const Point3> tgt, double tau,
                              std::span<const std::size_t> src_ids, std::span<const std::size_t> tgt_ids) {
  if (src.size() != tgt.size()) throw Error("compatibility: source/target size mismatch");
  if (!(tau > 0)) throw ConfigError("sm.tau must be positive");
  const bool with_ids = !src_ids.empty() && !tgt_ids.empty();
  if (with_ids && (src_ids.size() != src.size() || tgt_ids.size() != tgt.size())) {
    throw Error("compatibility: id list size mismatch");
  }
  const auto n = static_cast<Eigen::Index>(src.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double inv_tau2 = 1.0 / (tau * tau);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto ua = static_cast<std::size_t>(a);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const auto ub = static_cast<std::size_t>(b);
      if (with_ids && (src_ids[ua] == src_ids[ub] || tgt_ids[ua] == tgt_ids[ub])) continue;
      const double delta = std::abs((src[ua] - src[ub]).norm() - (tgt[ua] - tgt[ub]).norm());
      const double score = std::max(0.0, 1.0 - delta * delta * inv_tau2);
      m(a, b) = score;
      m(b, a) = score;
    }
  }
  return m;
}

PrincipalEigen principal_eigenvector(const Eigen::MatrixXd& m, double tol, int max_iters) {
  PrincipalEigen out;
  const auto n = m.rows();
  if (n == 0) return out;
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  for (int it = 1; it <= max_iters; ++it) {
    const Eigen::VectorXd y = m * x;
    const double ynorm = y.norm();
    out.iterations = it;
    if (ynorm == 0.0) {
      out.vector = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
      out.zero_matrix = true;
      out.converged = true;
      return out;
    }
    const double lambda = x.dot(y);
    if ((y - lambda * x).norm() <= tol * std::abs(lambda)) {
      out.vector = y / ynorm;
      out.eigenvalue = lambda;
      out.converged = true;
      return out;
    }
    x = y / ynorm;
  }
  out.vector = x;
  out.eigenvalue = x.dot(m * x);
  return out;
}

ClusterResult greedy_main_cluster(const Eigen::MatrixXd& m, const Eigen::VectorXd& eigvec, std::size_t min_cluster) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (static_cast<std::size_t>(eigvec.size()) != n) throw Error("greedy_main_cluster: eigenvector size mismatch");
  ClusterResult out;
  out.eigvec = eigvec;
  std::vector<char> remaining(n, 1);
  std::size_t remaining_count = n;
  std::vector<std::size_t> accepted;

  for (;;) {
    if (accepted.size() + remaining_count <= min_cluster) {
      for (std::size_t i = 0; i < n; ++i) {
        if (remaining[i]) accepted.push_back(i);
      }
      break;
    }
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (remaining[i] && (best == n || eigvec[static_cast<Eigen::Index>(i)] > eigvec[static_cast<Eigen::Index>(best)])) {
        best = i;
      }
    }
    if (best == n || eigvec[static_cast<Eigen::Index>(best)] <= 1e-12) break;
    accepted.push_back(best);
    remaining[best] = 0;
    --remaining_count;
    for (std::size_t j = 0; j < n; ++j) {
      if (remaining[j] && m(static_cast<Eigen::Index>(best), static_cast<Eigen::Index>(j)) == 0.0) {
        remaining[j] = 0;
        --remaining_count;
      }
    }
  }
  std::sort(accepted.begin(), accepted.end());
  out.kept = std::move(accepted);
  return out;
}

ClusterResult spectral_filter(std::span<const Point3> src, std::span<const Point3> tgt, const SpectralConfig& cfg,
                              std::span<const std::size_t> src_ids, std::span<const std::size_t> tgt_ids) {
  if (src.empty()) return {};
  const auto m = compatibility(src, tgt, cfg.tau, src_ids, tgt_ids);
  const auto eig = principal_eigenvector(m, cfg.tol, cfg.max_iters);
  return greedy_main_cluster(m, eig.vector, cfg.min_cluster);
}

}  // namespace hybridreg
