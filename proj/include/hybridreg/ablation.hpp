#pragma once

#include "hybridreg/config.hpp"
#include "hybridreg/metrics.hpp"
#include "hybridreg/pipeline.hpp"
#include "hybridreg/synth.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hybridreg {

struct SuiteSpec {
  SceneRecipe recipe = SceneRecipe::Room;
  std::size_t pairs = 50;
  std::uint64_t seed = 1;
  double min_overlap = 0.3;
  double max_overlap = 0.7;
  double noise_sigma = 0.005;
  double max_angle_deg = 60.0;
  double max_translation = 0.5;
  double spacing = 0.015;
};

// Pair `index` of the suite; deterministic per (spec, index). Scenes whose overlap draw
// cannot be met are redrawn from the next sub-seed.
ScenePair suite_pair(const SuiteSpec& spec, std::size_t index);

enum class AblationMode { NodeChoice, SmPlacement };

AblationMode parse_ablation_mode(std::string_view name);  // "node-choice", "sm-placement"
std::string to_string(AblationMode mode);

// node-choice: grid-superpoint, non-salient-only, salient-only, hybrid, hybrid+dm.
// sm-placement: sm-neither, sm-salient, sm-both, sm-non-salient.
std::vector<PipelineVariant> ablation_variants(AblationMode mode);

struct ConfigurationReport {
  PipelineVariant variant;
  BenchmarkSummary summary;
  std::vector<PipelineCounts> counts;  // aligned with summary.records
};

struct SuiteReport {
  std::string mode;  // "eval", "node-choice" or "sm-placement"
  SuiteSpec suite;
  PipelineConfig config;
  std::vector<ConfigurationReport> configurations;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// Every variant runs on the same pairs; the per-cloud front end is computed once per pair.
SuiteReport run_suite(const SuiteSpec& spec, const PipelineConfig& cfg, std::span<const PipelineVariant> variants,
                      const ProgressFn& progress = {});

SuiteReport evaluate_suite(const SuiteSpec& spec, const PipelineConfig& cfg, const ProgressFn& progress = {});

SuiteReport ablation_suite(AblationMode mode, const SuiteSpec& spec, const PipelineConfig& cfg,
                           const ProgressFn& progress = {});

}  // namespace hybridreg
