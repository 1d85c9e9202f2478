#pragma once

#include "hybridreg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hybridreg {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Static 3-d tree over a copy of the input positions.
///
/// Built once, then queried read-only; concurrent queries are safe.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(std::span<const Point3> points, std::size_t leaf_size = 12);
  explicit KdTree(const PointCloud& cloud) : KdTree(std::span<const Point3>(cloud.points)) {}

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point3& point(std::size_t i) const { return points_[i]; }

  // All indexed points with distance < r, ascending by (distance, index), or in the
  // (deterministic) traversal order when `sorted` is false.
  // Coincident points (distance 0) are included.
  std::vector<Neighbor> radius(const Point3& query, double r, bool sorted = true) const;

  // Closest indexed point; equal distances resolve to the lowest index.
  // Throws EmptyInputError on an empty tree.
  Neighbor nearest(const Point3& query) const;

 private:
  struct Node {
    // Leaf when `left < 0`; then [begin, end) indexes into order_.
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    int dim = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  void radius_recurse(std::int32_t node, const Point3& q, double r2, std::vector<Neighbor>& out) const;
  void nearest_recurse(std::int32_t node, const Point3& q, std::size_t& best, double& best_d2) const;

  std::vector<Point3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::size_t leaf_size_ = 12;
};

// Neighbors of `query` strictly within r, ascending by distance. A point that coincides
// with the query (the query's own entry when it belongs to the index) is excluded.
std::vector<Neighbor> radius_neighbors(const KdTree& index, const Point3& query, double r, bool sorted = true);

}  // namespace hybridreg
