#include "hybridreg/patch_matching.hpp"

#include "hybridreg/errors.hpp"
#include "hybridreg/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace hybridreg {

PatchPartition point_to_node_group(const PointCloud& dense, const HybridNodes& nodes) {
  if (nodes.empty()) throw EmptyInputError("point_to_node_group: no nodes");
  const auto positions = nodes.all();
  const KdTree tree(positions);
  PatchPartition out;
  out.labels = nodes.labels();
  out.members.resize(positions.size());
  out.node_of.resize(dense.size());
  for (std::size_t i = 0; i < dense.size(); ++i) {
    const auto nn = tree.nearest(dense.points[i]);
    out.node_of[i] = nn.index;
    out.members[nn.index].push_back(i);
  }
  return out;
}

std::vector<std::size_t> nearest_members(const PatchPartition& partition, const PointCloud& dense,
                                         const Point3& node_position, std::size_t node, std::size_t limit) {
  auto ids = partition.members.at(node);
  const std::size_t take = limit == 0 ? ids.size() : std::min(limit, ids.size());
  std::vector<std::pair<double, std::size_t>> keyed;
  keyed.reserve(ids.size());
  for (auto id : ids) keyed.push_back({(dense.points[id] - node_position).squaredNorm(), id});
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(take), keyed.end());
  ids.resize(take);
  for (std::size_t k = 0; k < take; ++k) ids[k] = keyed[k].second;
  return ids;
}

Eigen::MatrixXd correlate(const FeatureSet& fs, const FeatureSet& ft) {
  if (fs.dim() != ft.dim()) throw Error("correlate: descriptor dimension mismatch");
  return fs.values * ft.values.transpose();
}

Eigen::MatrixXd dual_normalize(const Eigen::MatrixXd& c) {
  if (c.size() == 0) return c;
  Eigen::MatrixXd row = c;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    const double mx = c.row(i).maxCoeff();
    row.row(i) = (c.row(i).array() - mx).exp().matrix();
    row.row(i) /= row.row(i).sum();
  }
  Eigen::MatrixXd col = c;
  for (Eigen::Index j = 0; j < c.cols(); ++j) {
    const double mx = c.col(j).maxCoeff();
    col.col(j) = (c.col(j).array() - mx).exp().matrix();
    col.col(j) /= col.col(j).sum();
  }
  return row.cwiseProduct(col);
}

std::vector<PatchMatch> top_k_matches(const Eigen::MatrixXd& c, std::size_t k) {
  std::vector<PatchMatch> all;
  all.reserve(static_cast<std::size_t>(c.size()));
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      all.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), c(i, j)});
    }
  }
  const std::size_t take = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(take), all.end(),
                    [](const PatchMatch& a, const PatchMatch& b) {
                      if (a.confidence != b.confidence) return a.confidence > b.confidence;
                      return a.source < b.source || (a.source == b.source && a.target < b.target);
                    });
  all.resize(take);
  return all;
}

namespace {

std::vector<std::size_t> usable_of_class(const HybridNodes& nodes, std::span<const char> usable,
                                         std::optional<NodeClass> cls) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (cls && nodes.label(i) != *cls) continue;
    if (!usable.empty() && !usable[i]) continue;
    out.push_back(i);
  }
  return out;
}

std::vector<PatchMatch> match_block(const std::vector<std::size_t>& ids_s, const std::vector<std::size_t>& ids_t,
                                    const FeatureSet& feats_s, const FeatureSet& feats_t, std::size_t k) {
  if (ids_s.empty() || ids_t.empty()) return {};
  const auto scores = dual_normalize(correlate(feats_s.subset(ids_s), feats_t.subset(ids_t)));
  auto matches = top_k_matches(scores, k);
  for (auto& m : matches) {
    m.source = ids_s[m.source];
    m.target = ids_t[m.target];
  }
  return matches;
}

std::vector<PatchMatch> spectral_subset(const std::vector<PatchMatch>& matches, const HybridNodes& nodes_s,
                                        const HybridNodes& nodes_t, const SpectralConfig& cfg) {
  if (matches.empty()) return {};
  std::vector<Point3> src, tgt;
  std::vector<std::size_t> sid, tid;
  for (const auto& m : matches) {
    src.push_back(nodes_s.position(m.source));
    tgt.push_back(nodes_t.position(m.target));
    sid.push_back(m.source);
    tid.push_back(m.target);
  }
  const auto cluster = spectral_filter(src, tgt, cfg, sid, tid);
  std::vector<PatchMatch> out;
  for (auto k : cluster.kept) out.push_back(matches[k]);
  return out;
}

}  // namespace

PatchCorrespondences dual_class_match(const HybridNodes& nodes_s, const HybridNodes& nodes_t,
                                      const FeatureSet& feats_s, const FeatureSet& feats_t,
                                      const DualMatchConfig& cfg, std::span<const char> usable_s,
                                      std::span<const char> usable_t) {
  if (feats_s.size() != nodes_s.size() || feats_t.size() != nodes_t.size()) {
    throw Error("dual_class_match: features are not aligned with nodes");
  }
  PatchCorrespondences out;
  if (!cfg.split_classes) {
    out.c1 = match_block(usable_of_class(nodes_s, usable_s, std::nullopt),
                         usable_of_class(nodes_t, usable_t, std::nullopt), feats_s, feats_t, cfg.K);
    out.c = out.c1;
    return out;
  }

  out.c1 = match_block(usable_of_class(nodes_s, usable_s, NodeClass::Salient),
                       usable_of_class(nodes_t, usable_t, NodeClass::Salient), feats_s, feats_t, cfg.K);
  if (cfg.sm_salient) out.c1 = spectral_subset(out.c1, nodes_s, nodes_t, cfg.sm);

  out.c2 = match_block(usable_of_class(nodes_s, usable_s, NodeClass::NonSalient),
                       usable_of_class(nodes_t, usable_t, NodeClass::NonSalient), feats_s, feats_t, cfg.K);
  auto filtered = cfg.sm_non_salient ? spectral_subset(out.c2, nodes_s, nodes_t, cfg.sm) : out.c2;
  std::stable_sort(filtered.begin(), filtered.end(),
                   [](const PatchMatch& a, const PatchMatch& b) { return a.confidence > b.confidence; });
  if (!filtered.empty() && cfg.keep_fraction < 1.0) {
    const auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(cfg.keep_fraction * static_cast<double>(filtered.size()) - 1e-9)));
    filtered.resize(std::min(keep, filtered.size()));
  }
  out.c2_star = std::move(filtered);

  out.c = out.c1;
  out.c.insert(out.c.end(), out.c2_star.begin(), out.c2_star.end());
  return out;
}

}  // namespace hybridreg
