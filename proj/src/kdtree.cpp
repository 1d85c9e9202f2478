#include "hybridreg/kdtree.hpp"

#include "hybridreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace hybridreg {

KdTree::KdTree(std::span<const Point3> points, std::size_t leaf_size)
    : points_(points.begin(), points.end()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  if (!points_.empty()) {
    nodes_.reserve(2 * points_.size() / leaf_size_ + 1);
    build(0, static_cast<std::uint32_t>(points_.size()));
  }
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{-1, -1, begin, end, 0, 0.0});
  if (end - begin <= leaf_size_) return id;

  Point3 lo = Point3::Constant(std::numeric_limits<double>::infinity());
  Point3 hi = -lo;
  for (auto i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int dim = 0;
  (hi - lo).maxCoeff(&dim);
  if (hi[dim] == lo[dim]) return id;  // all coincident

  const auto mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a][dim] < points_[b][dim]; });
  const double split = points_[order_[mid]][dim];

  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  nodes_[id].dim = dim;
  nodes_[id].split = split;
  return id;
}

std::vector<Neighbor> KdTree::radius(const Point3& query, double r, bool sorted) const {
  std::vector<Neighbor> out;
  if (points_.empty() || !(r > 0.0)) return out;
  radius_recurse(0, query, r * r, out);
  for (auto& n : out) n.distance = std::sqrt(n.distance);
  if (!sorted) return out;
  std::sort(out.begin(), out.end(), [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.index < b.index);
  });
  return out;
}

void KdTree::radius_recurse(std::int32_t id, const Point3& q, double r2, std::vector<Neighbor>& out) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const auto idx = order_[i];
      const double d2 = (points_[idx] - q).squaredNorm();
      if (d2 < r2) out.push_back({idx, d2});
    }
    return;
  }
  const double diff = q[node.dim] - node.split;
  // Left holds coords <= split, right holds coords >= split.
  if (diff <= 0) {
    radius_recurse(node.left, q, r2, out);
    if (diff * diff < r2) radius_recurse(node.right, q, r2, out);
  } else {
    radius_recurse(node.right, q, r2, out);
    if (diff * diff < r2) radius_recurse(node.left, q, r2, out);
  }
}

Neighbor KdTree::nearest(const Point3& query) const {
  if (points_.empty()) throw EmptyInputError("nearest-neighbor query on an empty index");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  double best_d2 = std::numeric_limits<double>::infinity();
  nearest_recurse(0, query, best, best_d2);
  return {best, std::sqrt(best_d2)};
}

void KdTree::nearest_recurse(std::int32_t id, const Point3& q, std::size_t& best, double& best_d2) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      const double d2 = (points_[idx] - q).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && idx < best)) {
        best_d2 = d2;
        best = idx;
      }
    }
    return;
  }
  const double diff = q[node.dim] - node.split;
  const auto near = diff <= 0 ? node.left : node.right;
  const auto far = diff <= 0 ? node.right : node.left;
  nearest_recurse(near, q, best, best_d2);
  // <= keeps equal-distance candidates with a lower index reachable.
  if (diff * diff <= best_d2) nearest_recurse(far, q, best, best_d2);
}

std::vector<Neighbor> radius_neighbors(const KdTree& index, const Point3& query, double r, bool sorted) {
  auto out = index.radius(query, r, sorted);
  std::erase_if(out, [](const Neighbor& n) { return n.distance == 0.0; });
  return out;
}

}  // namespace hybridreg
