#include "hybridreg/point_matching.hpp"

#include "hybridreg/errors.hpp"

#include <cmath>
#include <limits>

namespace hybridreg {

CostMatrix patch_cost(const FeatureSet& fp, const FeatureSet& fq, NodeClass cls) {
  if (fp.size() == 0 || fq.size() == 0) throw EmptyInputError("patch_cost: empty patch");
  if (fp.dim() != fq.dim()) throw Error("patch_cost: descriptor dimension mismatch");
  CostMatrix out;
  out.cls = cls;
  out.entries = fp.values * fq.values.transpose() / std::sqrt(static_cast<double>(fp.dim()));
  return out;
}

namespace {

// log(sum(exp(.))) of each column of z + row_shift (broadcast along columns).
Eigen::RowVectorXd col_logsumexp(const Eigen::MatrixXd& z, const Eigen::VectorXd& row_shift) {
  Eigen::RowVectorXd out(z.cols());
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    const Eigen::VectorXd v = z.col(j) + row_shift;
    const double mx = v.maxCoeff();
    out[j] = mx + std::log((v.array() - mx).exp().sum());
  }
  return out;
}

}  // namespace

AssignmentMatrix sinkhorn(const Eigen::MatrixXd& cost, double alpha, int iters) {
  if (iters < 1) throw ConfigError("point.sinkhorn_iters must be at least 1");
  const Eigen::Index m = cost.rows();
  const Eigen::Index n = cost.cols();
  Eigen::MatrixXd z(m + 1, n + 1);
  z.topLeftCorner(m, n) = cost;
  z.col(n).setConstant(alpha);
  z.row(m).setConstant(alpha);

  Eigen::VectorXd log_mu = Eigen::VectorXd::Zero(m + 1);
  log_mu[m] = std::log(static_cast<double>(std::max<Eigen::Index>(n, 1)));
  Eigen::RowVectorXd log_nu = Eigen::RowVectorXd::Zero(n + 1);
  log_nu[n] = std::log(static_cast<double>(std::max<Eigen::Index>(m, 1)));

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m + 1);
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Zero(n + 1);
  // Eigen is column-major: work on the transpose for the row pass to stay cache friendly.
  const Eigen::MatrixXd zt = z.transpose();
  for (int it = 0; it < iters; ++it) {
    u = log_mu - col_logsumexp(zt, v.transpose()).transpose();
    v = log_nu - col_logsumexp(z, u);
  }
  AssignmentMatrix out;
  out.entries = (z.colwise() + u).rowwise() + v;
  out.entries = out.entries.array().exp().matrix();
  return out;
}

std::vector<PointMatch> mutual_top_k(const AssignmentMatrix& s, std::size_t k) {
  const Eigen::Index m = s.inner_rows();
  const Eigen::Index n = s.inner_cols();
  std::vector<PointMatch> out;
  if (k == 0 || m <= 0 || n <= 0) return out;
  const auto inner = s.inner();
  // k-th largest value per row / column is the admission threshold.
  auto kth = [k](std::vector<double> vals) {
    const auto kk = std::min<std::size_t>(k, vals.size());
    std::nth_element(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(kk - 1), vals.end(),
                     std::greater<>());
    return vals[kk - 1];
  };
  std::vector<double> row_thr(static_cast<std::size_t>(m)), col_thr(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < m; ++i) {
    std::vector<double> vals(inner.row(i).begin(), inner.row(i).end());
    row_thr[static_cast<std::size_t>(i)] = kth(std::move(vals));
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    std::vector<double> vals(inner.col(j).begin(), inner.col(j).end());
    col_thr[static_cast<std::size_t>(j)] = kth(std::move(vals));
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double x = inner(i, j);
      if (x >= row_thr[static_cast<std::size_t>(i)] && x >= col_thr[static_cast<std::size_t>(j)]) {
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), x});
      }
    }
  }
  return out;
}

}  // namespace hybridreg
