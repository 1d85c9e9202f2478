#pragma once

#include "hybridreg/kdtree.hpp"
#include "hybridreg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace hybridreg {

struct SamplerConfig {
  double r = 0.15;           // covariance neighborhood radius
  double gamma1 = 0.6;       // bound on lambda2 / lambda1
  double gamma2 = 0.6;       // bound on lambda3 / lambda2
  double nms_radius = 0.10;  // suppression radius among salient candidates
  double sigma = 0.15;       // non-salient points must be farther than this from every salient point
  int min_neighbors = 5;

  // Throws ConfigError when a field is out of range.
  void validate() const;
};

struct SaliencyRecord {
  std::size_t point_id = 0;
  Vec3 eigenvalues = Vec3::Zero();  // descending, clamped at 0
  double v = 0.0;                   // smallest eigenvalue, the NMS score
  bool passes_ratio_test = false;
  std::size_t neighbor_count = 0;
};

enum class NodeClass : std::uint8_t { Salient, NonSalient };

/// Labeled node set: salient points first, then non-salient points.
struct HybridNodes {
  std::vector<Point3> salient;      // positions taken from P2
  std::vector<Point3> non_salient;  // positions taken from P3
  std::vector<std::size_t> salient_ids;
  std::vector<std::size_t> non_salient_ids;

  std::size_t size() const { return salient.size() + non_salient.size(); }
  bool empty() const { return size() == 0; }
  NodeClass label(std::size_t node) const {
    return node < salient.size() ? NodeClass::Salient : NodeClass::NonSalient;
  }
  const Point3& position(std::size_t node) const {
    return node < salient.size() ? salient[node] : non_salient[node - salient.size()];
  }
  std::vector<Point3> all() const;
  std::vector<NodeClass> labels() const;

  // Builds a node set where every point carries the same class.
  static HybridNodes single_class(std::span<const Point3> points, NodeClass cls);
};

// Eigenvalue ratio test. A zero lambda1 fails; a zero lambda2 (with positive lambda1)
// counts the second ratio as 0.
bool passes_ratio_test(const Vec3& eigenvalues_desc, double gamma1, double gamma2);

// Distance-weighted scatter of `neighbors` about `center`: sum w (c - q)(c - q)^T / sum w, w = 1/|c - q|.
// Neighbors coinciding with the center are skipped. Returns zero if no neighbor contributes.
Mat3 weighted_covariance(const Point3& center, std::span<const Point3> neighbors);

std::vector<SaliencyRecord> iss_saliency(const PointCloud& p2, const KdTree& index, const SamplerConfig& cfg);

// Greedy suppression in descending-v order (ties by ascending point id). Returns accepted
// point ids in acceptance order.
std::vector<std::size_t> nms(std::span<const SaliencyRecord> records, const PointCloud& p2, double nms_radius);

// Indices of P3 points whose nearest salient point lies farther than sigma.
std::vector<std::size_t> select_non_salient_ids(const PointCloud& p3, std::span<const Point3> salient, double sigma);
std::vector<Point3> select_non_salient(const PointCloud& p3, std::span<const Point3> salient, double sigma);

HybridNodes hybrid_points(const PointCloud& p2, const PointCloud& p3, const SamplerConfig& cfg);

// Salient extraction alone (ISS + NMS over P2); exposed for repeatability checks.
std::vector<std::size_t> salient_points(const PointCloud& p2, const SamplerConfig& cfg);

}  // namespace hybridreg
