#pragma once

#include "hybridreg/config.hpp"
#include "hybridreg/features.hpp"
#include "hybridreg/metrics.hpp"
#include "hybridreg/patch_matching.hpp"
#include "hybridreg/registration.hpp"
#include "hybridreg/sampler.hpp"
#include "hybridreg/synth.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace hybridreg {

/// Per-cloud products that do not depend on the matching variant.
struct Fragment {
  PointCloud dense;  // P1, with normals
  PointCloud p2;
  PointCloud p3;
  FeatureSet features;  // one row per dense point
  HybridNodes hybrid;
};

Fragment prepare_fragment(const PointCloud& raw, const PipelineConfig& cfg);

enum class NodeMode {
  GridSuperpoint,  // every P3 point
  NonSalientOnly,
  SalientOnly,
  Hybrid,
};

struct PipelineVariant {
  std::string name = "hybrid+dm";
  NodeMode nodes = NodeMode::Hybrid;
  bool split_classes = true;
  bool sm_salient = false;
  bool sm_non_salient = true;

  // Node mode Hybrid with the matching switches taken from the config.
  static PipelineVariant from_config(const PipelineConfig& cfg);
};

struct PipelineCounts {
  std::size_t salient_source = 0;
  std::size_t non_salient_source = 0;
  std::size_t salient_target = 0;
  std::size_t non_salient_target = 0;
  std::size_t c1 = 0;
  std::size_t c2 = 0;
  std::size_t c2_star = 0;
  std::size_t c = 0;
  std::size_t point_correspondences = 0;  // before the cap
  std::size_t used_correspondences = 0;   // after the cap
};

struct MatchOutput {
  bool registered = false;
  std::string failure;  // estimator message when registration failed
  RegistrationResult result;
  PatchCorrespondences patches;
  std::vector<std::vector<Correspondence>> per_patch;  // uncapped, one list per entry of patches.c
  std::vector<Correspondence> correspondences;         // capped by confidence, in patch order
  PipelineCounts counts;
};

// Node set of the given mode, drawn from the fragment's hybrid nodes or its P3 level.
HybridNodes select_nodes(const Fragment& fragment, NodeMode mode);

// Everything after the per-cloud front end: grouping, patch matching, point matching,
// correspondence cap and rigid estimation. LGR sees every patch's correspondences; IR, FMR
// and RANSAC use the capped list. Registration failures are reported in the
// output rather than thrown.
MatchOutput match_fragments(const Fragment& source, const Fragment& target, const PipelineConfig& cfg,
                            const PipelineVariant& variant);

MatchOutput register_clouds(const PointCloud& source, const PointCloud& target, const PipelineConfig& cfg);

// Ground-truth overlap pairs between the dense levels (mutual nearest neighbours under
// t_gt within twice the P1 cell).
std::vector<std::pair<std::size_t, std::size_t>> dense_gt_pairs(const Fragment& source, const Fragment& target,
                                                                const RigidTransform& t_gt,
                                                                const PipelineConfig& cfg);

PairEvaluation evaluate_match(const MatchOutput& match, const Fragment& source, const Fragment& target,
                              const RigidTransform& t_gt,
                              const std::vector<std::pair<std::size_t, std::size_t>>& gt_pairs,
                              const PipelineConfig& cfg);

struct PipelineRun {
  MatchOutput match;
  PairEvaluation evaluation;
};

PipelineRun run_pipeline(const ScenePair& pair, const PipelineConfig& cfg);
PipelineRun run_pipeline(const ScenePair& pair, const PipelineConfig& cfg, const PipelineVariant& variant);

}  // namespace hybridreg
