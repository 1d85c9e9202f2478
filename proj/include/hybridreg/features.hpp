#pragma once

#include "hybridreg/kdtree.hpp"
#include "hybridreg/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace hybridreg {

using Descriptor = Eigen::VectorXd;

struct FeatureConfig {
  double radius = 0.125;
  int bins = 11;
  double normal_radius = 0.075;
  double context_radius = 0.6;          // 0 drops the context block
  double context_normal_radius = 0.1;  // normals of the coarse level
};

/// Row-aligned descriptors for a point or node list. Every row has unit L2 norm.
struct FeatureSet {
  Eigen::MatrixXd values;        // rows = items, cols = descriptor dimension
  std::vector<char> degenerate;  // 1 where the descriptor had no support

  std::size_t size() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(values.cols()); }
  Descriptor row(std::size_t i) const { return values.row(static_cast<Eigen::Index>(i)).transpose(); }

  // Rows `ids` in the given order.
  FeatureSet subset(std::span<const std::size_t> ids) const;
};

struct NormalEstimate {
  PointCloud cloud;              // input positions with normals filled in
  std::vector<char> degenerate;  // 1 where fewer than 3 neighbors were found
};

// Smallest-eigenvector normals of the unweighted neighborhood scatter (the point itself
// included). Sign is fixed toward +z, then +x, then +y on exact ties. Points with fewer
// than 3 neighbors get (0,0,1) and a degeneracy flag.
NormalEstimate estimate_normals(const PointCloud& cloud, double radius);

/// Three sign-insensitive pair angles per neighbor, histogrammed (bins per angle) and
/// blended with the neighbors' own histograms weighted by inverse normalized distance.
///
/// All angles are built from |dot| terms, so the result does not depend on normal
/// orientation and is invariant under rigid motions of the cloud and its normals.
class DescriptorEstimator {
 public:
  DescriptorEstimator(const PointCloud& cloud_with_normals, double radius, int bins = 11);

  std::size_t dim() const { return static_cast<std::size_t>(3 * bins_); }

  // Second element is true when the point had no neighbors (uniform descriptor).
  std::pair<Descriptor, bool> describe(std::size_t point_id) const;
  FeatureSet describe_all() const;

 private:
  Eigen::VectorXd pair_histogram(std::size_t center, std::span<const Neighbor> nbrs) const;
  // hist_of(k) returns the histogram of neighbor k.
  template <typename HistOf>
  std::pair<Descriptor, bool> finish(std::span<const Neighbor> nbrs, const Eigen::VectorXd& own,
                                     HistOf hist_of) const;

  const PointCloud& cloud_;
  KdTree index_;
  double radius_;
  int bins_;
};

// Convenience wrapper; builds an index per call.
Descriptor point_descriptor(const PointCloud& cloud_with_normals, std::size_t point_id, double radius,
                            int bins = 11);

// Component-wise mean of the members, rescaled to unit norm. Throws EmptyInputError
// for an empty member list.
Descriptor node_descriptor(std::span<const Descriptor> members);
Descriptor node_descriptor(const FeatureSet& features, std::span<const std::size_t> members);

// Embedding used for node and point matching. Every dense point gets its own histogram at
// cfg.radius, followed by the histogram of its nearest `coarse` point computed over the
// coarse level at cfg.context_radius. Each block is square-rooted, loses its component along
// the all-ones direction (which every histogram shares) and is rescaled to unit norm; the
// concatenation is then normalized. Points whose blocks all vanish keep a zero row and are
// flagged degenerate. `coarse` needs no normals; they are estimated at
// cfg.context_normal_radius and coarse points with too few neighbors for a normal are
// skipped (all of them skipped leaves the context block zero).
FeatureSet matching_features(const PointCloud& dense_with_normals, const PointCloud& coarse,
                             const FeatureConfig& cfg);

// One line per descriptor, `dim` space-separated values.
void write_features(const FeatureSet& features, std::ostream& out);

}  // namespace hybridreg
