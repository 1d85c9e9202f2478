#pragma once

#include "hybridreg/features.hpp"
#include "hybridreg/sampler.hpp"
#include "hybridreg/spectral.hpp"
#include "hybridreg/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace hybridreg {

/// Assignment of dense points to their nearest node.
struct PatchPartition {
  std::vector<std::size_t> node_of;               // dense point -> node
  std::vector<std::vector<std::size_t>> members;  // node -> dense points, ascending
  std::vector<NodeClass> labels;                  // node -> class

  std::size_t node_count() const { return members.size(); }
};

// Nearest node per dense point (ties resolve to the lowest node id). Empty patches
// are kept in the partition. Throws EmptyInputError when there are no nodes.
PatchPartition point_to_node_group(const PointCloud& dense, const HybridNodes& nodes);

// Members of `node` ordered by distance to the node (ties by point id), truncated to `limit`
// (0 keeps everything).
std::vector<std::size_t> nearest_members(const PatchPartition& partition, const PointCloud& dense,
                                         const Point3& node_position, std::size_t node, std::size_t limit);

struct PatchMatch {
  std::size_t source = 0;
  std::size_t target = 0;
  double confidence = 0.0;

  friend bool operator==(const PatchMatch&, const PatchMatch&) = default;
};

// Inner products of row-aligned unit descriptors. Throws on a dimension mismatch.
Eigen::MatrixXd correlate(const FeatureSet& fs, const FeatureSet& ft);

// Row-wise softmax times column-wise softmax, element by element.
Eigen::MatrixXd dual_normalize(const Eigen::MatrixXd& c);

// K largest entries, descending; ties keep row-major order.
std::vector<PatchMatch> top_k_matches(const Eigen::MatrixXd& c, std::size_t k);

struct DualMatchConfig {
  std::size_t K = 128;
  double keep_fraction = 0.10;  // applied to the non-salient branch after filtering
  bool split_classes = true;    // false: all nodes matched as one class, no filtering
  bool sm_salient = false;
  bool sm_non_salient = true;
  SpectralConfig sm;
};

struct PatchCorrespondences {
  std::vector<PatchMatch> c1;       // salient branch
  std::vector<PatchMatch> c2;       // non-salient branch before filtering
  std::vector<PatchMatch> c2_star;  // non-salient branch after filtering and truncation
  std::vector<PatchMatch> c;        // c1 followed by c2_star
};

// Node ids index HybridNodes (salient first). `usable_*` (empty = all usable) marks nodes
// with a non-empty patch; unusable nodes never enter a correlation matrix.
PatchCorrespondences dual_class_match(const HybridNodes& nodes_s, const HybridNodes& nodes_t,
                                      const FeatureSet& feats_s, const FeatureSet& feats_t,
                                      const DualMatchConfig& cfg, std::span<const char> usable_s = {},
                                      std::span<const char> usable_t = {});

}  // namespace hybridreg
