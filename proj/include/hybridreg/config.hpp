#pragma once

#include "hybridreg/patch_matching.hpp"
#include "hybridreg/sampler.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hybridreg {

struct GridConfig {
  double p1 = 0.025;  // dense level, patch members
  double p2 = 0.05;   // salient candidates
  double p3 = 0.10;   // non-salient candidates
};

struct PointConfig {
  double alpha = 0.0;
  int sinkhorn_iters = 100;
  std::size_t k = 3;
  std::size_t max_patch_points = 64;  // closest members per patch fed to Sinkhorn; 0 = all
};

enum class Estimator { Lgr, Ransac };

struct RegConfig {
  Estimator estimator = Estimator::Lgr;
  double accept_radius = 0.1;
  int refine_iters = 5;
  int ransac_iters = 1000;
  double ransac_threshold = 0.1;
  std::uint64_t seed = 0;
};

struct EvalConfig {
  double ir_threshold = 0.1;
  double fmr_threshold = 0.05;
  double rmse_threshold = 0.2;
  std::size_t max_correspondences = 1000;  // 0 = no cap
};

struct PipelineConfig {
  double scale = 1.0;
  GridConfig grid;
  SamplerConfig sampler;
  FeatureConfig features;
  DualMatchConfig match;
  PointConfig point;
  RegConfig reg;
  EvalConfig eval;

  // Defaults with every length multiplied by `scale`.
  static PipelineConfig scaled(double scale);

  // Throws ConfigError for unknown keys or malformed values. "scale" cannot be set here.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;
  static std::vector<std::string> keys();  // includes "scale"

  void validate() const;  // throws ConfigError
  void write(std::ostream& out) const;  // key=value lines, "scale" first
};

using Assignments = std::vector<std::pair<std::string, std::string>>;

// Flat key=value text; '#' starts a comment; blank lines ignored.
Assignments parse_assignments(std::istream& in);
Assignments read_assignments(const std::string& path);

// Starts from scaled defaults (last "scale" assignment, else 1), then applies the
// remaining assignments in order and validates.
PipelineConfig build_config(const Assignments& assignments);

}  // namespace hybridreg
