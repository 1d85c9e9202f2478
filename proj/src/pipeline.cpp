#include "hybridreg/pipeline.hpp"

#include "hybridreg/errors.hpp"
#include "hybridreg/grid.hpp"
#include "hybridreg/point_matching.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace hybridreg {

Fragment prepare_fragment(const PointCloud& raw, const PipelineConfig& cfg) {
  if (raw.empty()) throw EmptyInputError("prepare_fragment: empty cloud");
  Fragment f;
  f.dense = estimate_normals(grid_downsample(raw, cfg.grid.p1), cfg.features.normal_radius).cloud;
  f.p2 = grid_downsample(raw, cfg.grid.p2);
  f.p3 = grid_downsample(raw, cfg.grid.p3);
  f.features = matching_features(f.dense, f.p2, cfg.features);
  f.hybrid = hybrid_points(f.p2, f.p3, cfg.sampler);
  return f;
}

PipelineVariant PipelineVariant::from_config(const PipelineConfig& cfg) {
  PipelineVariant v;
  v.split_classes = cfg.match.split_classes;
  v.sm_salient = cfg.match.sm_salient;
  v.sm_non_salient = cfg.match.sm_non_salient;
  return v;
}

HybridNodes select_nodes(const Fragment& fragment, NodeMode mode) {
  switch (mode) {
    case NodeMode::GridSuperpoint: return HybridNodes::single_class(fragment.p3.points, NodeClass::NonSalient);
    case NodeMode::NonSalientOnly: return HybridNodes::single_class(fragment.hybrid.non_salient, NodeClass::NonSalient);
    case NodeMode::SalientOnly: return HybridNodes::single_class(fragment.hybrid.salient, NodeClass::Salient);
    case NodeMode::Hybrid: return fragment.hybrid;
  }
  return fragment.hybrid;
}

namespace {

struct NodeView {
  HybridNodes nodes;
  PatchPartition partition;
  FeatureSet features;
  std::vector<char> usable;
};

NodeView node_view(const Fragment& fragment, NodeMode mode) {
  NodeView v;
  v.nodes = select_nodes(fragment, mode);
  const auto n = v.nodes.size();
  v.features.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                            static_cast<Eigen::Index>(fragment.features.dim()));
  v.features.degenerate.assign(n, 1);
  v.usable.assign(n, 0);
  if (n == 0) return v;
  v.partition = point_to_node_group(fragment.dense, v.nodes);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& members = v.partition.members[i];
    if (members.empty()) continue;
    try {
      v.features.values.row(static_cast<Eigen::Index>(i)) = node_descriptor(fragment.features, members).transpose();
    } catch (const DegenerateError&) {
      continue;  // every member degenerate
    }
    v.features.degenerate[i] = 0;
    v.usable[i] = 1;
  }
  return v;
}

std::vector<Correspondence> match_patch(const PatchMatch& pm, const Fragment& s, const Fragment& t,
                                        const NodeView& vs, const NodeView& vt, const PipelineConfig& cfg) {
  const auto ms = nearest_members(vs.partition, s.dense, vs.nodes.position(pm.source), pm.source,
                                  cfg.point.max_patch_points);
  const auto mt = nearest_members(vt.partition, t.dense, vt.nodes.position(pm.target), pm.target,
                                  cfg.point.max_patch_points);
  const auto cost = patch_cost(s.features.subset(ms), t.features.subset(mt), vs.nodes.label(pm.source));
  const auto assignment = sinkhorn(cost.entries, cfg.point.alpha, cfg.point.sinkhorn_iters);
  std::vector<Correspondence> out;
  for (const auto& m : mutual_top_k(assignment, cfg.point.k)) {
    out.push_back({s.dense.points[ms[m.source]], t.dense.points[mt[m.target]], m.confidence});
  }
  return out;
}

// The `cap` most confident correspondences overall (earlier entries win ties), flattened in
// patch order.
std::vector<Correspondence> capped(const std::vector<std::vector<Correspondence>>& per_patch, std::size_t cap) {
  std::vector<Correspondence> out;
  std::size_t total = 0;
  for (const auto& p : per_patch) total += p.size();
  if (cap == 0 || total <= cap) {
    for (const auto& p : per_patch) out.insert(out.end(), p.begin(), p.end());
    return out;
  }
  struct Key {
    double confidence;
    std::size_t patch, index;
  };
  std::vector<Key> keys;
  keys.reserve(total);
  for (std::size_t p = 0; p < per_patch.size(); ++p) {
    for (std::size_t i = 0; i < per_patch[p].size(); ++i) keys.push_back({per_patch[p][i].weight, p, i});
  }
  std::stable_sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) { return a.confidence > b.confidence; });
  std::vector<std::vector<char>> keep(per_patch.size());
  for (std::size_t p = 0; p < per_patch.size(); ++p) keep[p].assign(per_patch[p].size(), 0);
  for (std::size_t k = 0; k < cap; ++k) keep[keys[k].patch][keys[k].index] = 1;
  for (std::size_t p = 0; p < per_patch.size(); ++p) {
    for (std::size_t i = 0; i < per_patch[p].size(); ++i) {
      if (keep[p][i]) out.push_back(per_patch[p][i]);
    }
  }
  return out;
}

}  // namespace

MatchOutput match_fragments(const Fragment& source, const Fragment& target, const PipelineConfig& cfg,
                            const PipelineVariant& variant) {
  MatchOutput out;
  const auto vs = node_view(source, variant.nodes);
  const auto vt = node_view(target, variant.nodes);
  out.counts.salient_source = vs.nodes.salient.size();
  out.counts.non_salient_source = vs.nodes.non_salient.size();
  out.counts.salient_target = vt.nodes.salient.size();
  out.counts.non_salient_target = vt.nodes.non_salient.size();

  if (!vs.nodes.empty() && !vt.nodes.empty()) {
    DualMatchConfig dm = cfg.match;
    dm.split_classes = variant.split_classes;
    dm.sm_salient = variant.sm_salient;
    dm.sm_non_salient = variant.sm_non_salient;
    out.patches = dual_class_match(vs.nodes, vt.nodes, vs.features, vt.features, dm, vs.usable, vt.usable);
  }
  out.counts.c1 = out.patches.c1.size();
  out.counts.c2 = out.patches.c2.size();
  out.counts.c2_star = out.patches.c2_star.size();
  out.counts.c = out.patches.c.size();

  const auto& c = out.patches.c;
  out.per_patch.resize(c.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(c.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    out.per_patch[k] = match_patch(c[k], source, target, vs, vt, cfg);
  }
  for (const auto& p : out.per_patch) out.counts.point_correspondences += p.size();
  out.correspondences = capped(out.per_patch, cfg.eval.max_correspondences);
  out.counts.used_correspondences = out.correspondences.size();

  try {
    // LGR draws its local hypotheses from every patch; the cap only limits what is scored
    // and what RANSAC samples from.
    if (cfg.reg.estimator == Estimator::Lgr) {
      out.result = lgr(out.per_patch, cfg.reg.accept_radius, cfg.reg.refine_iters);
    } else {
      out.result = ransac(out.correspondences, cfg.reg.ransac_iters, cfg.reg.ransac_threshold, cfg.reg.seed);
    }
    out.registered = true;
  } catch (const RegistrationFailure& e) {
    out.failure = e.what();
  }
  return out;
}

MatchOutput register_clouds(const PointCloud& source, const PointCloud& target, const PipelineConfig& cfg) {
  const auto fs = prepare_fragment(source, cfg);
  const auto ft = prepare_fragment(target, cfg);
  return match_fragments(fs, ft, cfg, PipelineVariant::from_config(cfg));
}

std::vector<std::pair<std::size_t, std::size_t>> dense_gt_pairs(const Fragment& source, const Fragment& target,
                                                                const RigidTransform& t_gt,
                                                                const PipelineConfig& cfg) {
  return gt_correspondences(source.dense, target.dense, t_gt, 2.0 * cfg.grid.p1);
}

PairEvaluation evaluate_match(const MatchOutput& match, const Fragment& source, const Fragment& target,
                              const RigidTransform& t_gt,
                              const std::vector<std::pair<std::size_t, std::size_t>>& gt_pairs,
                              const PipelineConfig& cfg) {
  PairEvaluation e;
  const auto ir = inlier_ratio(match.correspondences, t_gt, cfg.eval.ir_threshold);
  e.ir = ir.value;
  e.ir_empty = ir.empty;
  e.fmr_success = e.ir > cfg.eval.fmr_threshold;
  e.correspondences = match.correspondences.size();
  e.registered = match.registered;
  if (match.registered) {
    std::tie(e.rre, e.rte) = rre_rte(match.result.transform, t_gt);
    e.rmse = rmse(match.result.transform, source.dense, target.dense, gt_pairs);
    e.rr_success = e.rmse < cfg.eval.rmse_threshold;
  } else {
    e.rre = 180.0;
    e.rte = std::numeric_limits<double>::infinity();
    e.rmse = std::numeric_limits<double>::infinity();
    e.rr_success = false;
  }
  return e;
}

PipelineRun run_pipeline(const ScenePair& pair, const PipelineConfig& cfg) {
  return run_pipeline(pair, cfg, PipelineVariant::from_config(cfg));
}

PipelineRun run_pipeline(const ScenePair& pair, const PipelineConfig& cfg, const PipelineVariant& variant) {
  const auto fs = prepare_fragment(pair.source, cfg);
  const auto ft = prepare_fragment(pair.target, cfg);
  PipelineRun run;
  run.match = match_fragments(fs, ft, cfg, variant);
  run.evaluation = evaluate_match(run.match, fs, ft, pair.t_gt, dense_gt_pairs(fs, ft, pair.t_gt, cfg), cfg);
  return run;
}

}  // namespace hybridreg
