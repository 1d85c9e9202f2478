#include "hybridreg/ablation.hpp"

#include "hybridreg/errors.hpp"

#include <cstdio>
#include <exception>
#include <random>

namespace hybridreg {

ScenePair suite_pair(const SuiteSpec& spec, std::size_t index) {
  if (!(spec.min_overlap > 0 && spec.min_overlap <= spec.max_overlap && spec.max_overlap <= 1)) {
    throw ConfigError("suite overlap range must satisfy 0 < min <= max <= 1");
  }
  std::string last_error;
  for (std::uint64_t attempt = 0; attempt < 16; ++attempt) {
    std::seed_seq seq{spec.seed, static_cast<std::uint64_t>(index), attempt};
    std::mt19937_64 rng(seq);
    const double overlap = std::uniform_real_distribution<double>(spec.min_overlap, spec.max_overlap)(rng);
    const auto t = random_transform(rng, spec.max_angle_deg, spec.max_translation);
    const std::uint64_t scene_seed = rng();
    try {
      return synth_pair(spec.recipe, t, overlap, spec.noise_sigma, scene_seed, spec.spacing);
    } catch (const GenerationError& e) {
      last_error = e.what();
    }
  }
  throw GenerationError("suite pair " + std::to_string(index) + ": " + last_error);
}

AblationMode parse_ablation_mode(std::string_view name) {
  if (name == "node-choice") return AblationMode::NodeChoice;
  if (name == "sm-placement") return AblationMode::SmPlacement;
  throw ConfigError("unknown ablation mode '" + std::string(name) + "'");
}

std::string to_string(AblationMode mode) {
  return mode == AblationMode::NodeChoice ? "node-choice" : "sm-placement";
}

std::vector<PipelineVariant> ablation_variants(AblationMode mode) {
  auto joint = [](std::string name, NodeMode nodes) {
    PipelineVariant v;
    v.name = std::move(name);
    v.nodes = nodes;
    v.split_classes = false;
    v.sm_salient = false;
    v.sm_non_salient = false;
    return v;
  };
  auto split = [](std::string name, bool sm_salient, bool sm_non_salient) {
    PipelineVariant v;
    v.name = std::move(name);
    v.sm_salient = sm_salient;
    v.sm_non_salient = sm_non_salient;
    return v;
  };
  if (mode == AblationMode::NodeChoice) {
    return {joint("grid-superpoint", NodeMode::GridSuperpoint), joint("non-salient-only", NodeMode::NonSalientOnly),
            joint("salient-only", NodeMode::SalientOnly), joint("hybrid", NodeMode::Hybrid),
            split("hybrid+dm", false, true)};
  }
  return {split("sm-neither", false, false), split("sm-salient", true, false), split("sm-both", true, true),
          split("sm-non-salient", false, true)};
}

SuiteReport run_suite(const SuiteSpec& spec, const PipelineConfig& cfg, std::span<const PipelineVariant> variants,
                      const ProgressFn& progress) {
  cfg.validate();
  const std::size_t n = spec.pairs;
  std::vector<std::vector<PairEvaluation>> evals(variants.size(), std::vector<PairEvaluation>(n));
  std::vector<std::vector<PipelineCounts>> counts(variants.size(), std::vector<PipelineCounts>(n));
  std::vector<std::exception_ptr> errors(n);
  std::size_t done = 0;

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    try {
      const auto pair = suite_pair(spec, i);
      const auto fs = prepare_fragment(pair.source, cfg);
      const auto ft = prepare_fragment(pair.target, cfg);
      const auto gt = dense_gt_pairs(fs, ft, pair.t_gt, cfg);
      char name[64];
      std::snprintf(name, sizeof(name), "%s-%04zu", to_string(spec.recipe).c_str(), i);
      for (std::size_t v = 0; v < variants.size(); ++v) {
        const auto match = match_fragments(fs, ft, cfg, variants[v]);
        evals[v][i] = evaluate_match(match, fs, ft, pair.t_gt, gt, cfg);
        evals[v][i].name = name;
        counts[v][i] = match.counts;
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
#pragma omp critical
    {
      ++done;
      if (progress) progress(done, n);
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  SuiteReport report;
  report.suite = spec;
  report.config = cfg;
  for (std::size_t v = 0; v < variants.size(); ++v) {
    report.configurations.push_back({variants[v], summarize(std::move(evals[v])), std::move(counts[v])});
  }
  return report;
}

SuiteReport evaluate_suite(const SuiteSpec& spec, const PipelineConfig& cfg, const ProgressFn& progress) {
  const PipelineVariant variant = PipelineVariant::from_config(cfg);
  auto report = run_suite(spec, cfg, std::span<const PipelineVariant>(&variant, 1), progress);
  report.mode = "eval";
  return report;
}

SuiteReport ablation_suite(AblationMode mode, const SuiteSpec& spec, const PipelineConfig& cfg,
                           const ProgressFn& progress) {
  const auto variants = ablation_variants(mode);
  auto report = run_suite(spec, cfg, variants, progress);
  report.mode = to_string(mode);
  return report;
}

}  // namespace hybridreg
