#pragma once

#include "hybridreg/features.hpp"
#include "hybridreg/sampler.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace hybridreg {

/// Scaled descriptor similarities of one patch pair, rows = source members.
struct CostMatrix {
  Eigen::MatrixXd entries;
  NodeClass cls = NodeClass::Salient;
};

// F_P F_Q^T / sqrt(d). Throws EmptyInputError for an empty patch and Error on a
// dimension mismatch.
CostMatrix patch_cost(const FeatureSet& fp, const FeatureSet& fq, NodeClass cls);

// (m+1) x (n+1) soft assignment with a dustbin row and column.
struct AssignmentMatrix {
  Eigen::MatrixXd entries;

  Eigen::Index inner_rows() const { return entries.rows() - 1; }
  Eigen::Index inner_cols() const { return entries.cols() - 1; }
  auto inner() const { return entries.topLeftCorner(inner_rows(), inner_cols()); }
};

// Log-domain Sinkhorn on the cost matrix augmented with a dustbin row/column of value
// `alpha`. Row marginals are (1,...,1,n) and column marginals (1,...,1,m), so each real
// point distributes one unit of mass and the dustbin absorbs the rest.
AssignmentMatrix sinkhorn(const Eigen::MatrixXd& cost, double alpha, int iters);

struct PointMatch {
  std::size_t source = 0;  // row index (patch-local unless remapped)
  std::size_t target = 0;
  double confidence = 0.0;

  friend bool operator==(const PointMatch&, const PointMatch&) = default;
};

// Pairs whose inner entry ranks within the top k of its row and of its column. Rank is
// the number of strictly larger entries, so ties share a rank. Row-major output order.
std::vector<PointMatch> mutual_top_k(const AssignmentMatrix& s, std::size_t k);

}  // namespace hybridreg
