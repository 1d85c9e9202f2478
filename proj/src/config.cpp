#include "hybridreg/config.hpp"

#include "hybridreg/cloud_io.hpp"
#include "hybridreg/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <type_traits>
#include <variant>

namespace hybridreg {
namespace {

static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seed is stored through a size_t field");

using FieldRef = std::variant<double*, int*, std::size_t*, bool*, Estimator*>;

std::vector<std::pair<std::string_view, FieldRef>> fields(PipelineConfig& c) {
  return {
      {"grid.p1", &c.grid.p1},
      {"grid.p2", &c.grid.p2},
      {"grid.p3", &c.grid.p3},
      {"sampler.r", &c.sampler.r},
      {"sampler.gamma1", &c.sampler.gamma1},
      {"sampler.gamma2", &c.sampler.gamma2},
      {"sampler.nms_radius", &c.sampler.nms_radius},
      {"sampler.sigma", &c.sampler.sigma},
      {"sampler.min_neighbors", &c.sampler.min_neighbors},
      {"features.radius", &c.features.radius},
      {"features.bins", &c.features.bins},
      {"features.normal_radius", &c.features.normal_radius},
      {"features.context_radius", &c.features.context_radius},
      {"features.context_normal_radius", &c.features.context_normal_radius},
      {"match.K", &c.match.K},
      {"match.keep_fraction", &c.match.keep_fraction},
      {"match.split_classes", &c.match.split_classes},
      {"match.sm_salient", &c.match.sm_salient},
      {"match.sm_non_salient", &c.match.sm_non_salient},
      {"sm.tau", &c.match.sm.tau},
      {"sm.min_cluster", &c.match.sm.min_cluster},
      {"sm.tol", &c.match.sm.tol},
      {"sm.max_iters", &c.match.sm.max_iters},
      {"point.alpha", &c.point.alpha},
      {"point.sinkhorn_iters", &c.point.sinkhorn_iters},
      {"point.k", &c.point.k},
      {"point.max_patch_points", &c.point.max_patch_points},
      {"reg.estimator", &c.reg.estimator},
      {"reg.accept_radius", &c.reg.accept_radius},
      {"reg.refine_iters", &c.reg.refine_iters},
      {"reg.ransac_iters", &c.reg.ransac_iters},
      {"reg.ransac_threshold", &c.reg.ransac_threshold},
      {"reg.seed", &c.reg.seed},
      {"eval.ir_threshold", &c.eval.ir_threshold},
      {"eval.fmr_threshold", &c.eval.fmr_threshold},
      {"eval.rmse_threshold", &c.eval.rmse_threshold},
      {"eval.max_correspondences", &c.eval.max_correspondences},
  };
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(value) + "' for " + std::string(key));
}

Estimator parse_estimator(std::string_view key, std::string_view value) {
  if (value == "lgr") return Estimator::Lgr;
  if (value == "ransac") return Estimator::Ransac;
  throw ConfigError("invalid estimator '" + std::string(value) + "' for " + std::string(key));
}

struct Assign {
  std::string_view key, value;
  void operator()(double* p) const { *p = parse_number<double>(key, value); }
  void operator()(int* p) const { *p = parse_number<int>(key, value); }
  void operator()(std::size_t* p) const { *p = parse_number<std::size_t>(key, value); }
  void operator()(bool* p) const { *p = parse_bool(key, value); }
  void operator()(Estimator* p) const { *p = parse_estimator(key, value); }
};

struct Show {
  std::string operator()(const double* p) const { return format_double(*p); }
  std::string operator()(const bool* p) const { return *p ? "true" : "false"; }
  std::string operator()(const Estimator* p) const { return *p == Estimator::Lgr ? "lgr" : "ransac"; }
  template <typename T>
  std::string operator()(const T* p) const {
    return std::to_string(*p);
  }
};

}  // namespace

PipelineConfig PipelineConfig::scaled(double scale) {
  if (!(scale > 0)) throw ConfigError("scale must be positive");
  PipelineConfig c;
  c.scale = scale;
  for (double* p : {&c.grid.p1, &c.grid.p2, &c.grid.p3, &c.sampler.r, &c.sampler.nms_radius, &c.sampler.sigma,
                    &c.features.radius, &c.features.normal_radius, &c.features.context_radius,
                    &c.features.context_normal_radius, &c.match.sm.tau, &c.reg.accept_radius,
                    &c.reg.ransac_threshold, &c.eval.ir_threshold, &c.eval.rmse_threshold}) {
    *p *= scale;
  }
  return c;
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
  if (key == "scale") throw ConfigError("scale must be applied through build_config");
  for (auto& [name, ref] : fields(*this)) {
    if (name == key) {
      std::visit(Assign{key, trim(value)}, ref);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::string PipelineConfig::get(std::string_view key) const {
  auto& self = const_cast<PipelineConfig&>(*this);
  if (key == "scale") return format_double(scale);
  for (auto& [name, ref] : fields(self)) {
    if (name == key) return std::visit(Show{}, ref);
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

std::vector<std::string> PipelineConfig::keys() {
  PipelineConfig c;
  std::vector<std::string> out{"scale"};
  for (auto& [name, ref] : fields(c)) out.emplace_back(name);
  return out;
}

void PipelineConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(scale, "scale");
  positive(grid.p1, "grid.p1");
  positive(grid.p2, "grid.p2");
  positive(grid.p3, "grid.p3");
  sampler.validate();
  positive(features.radius, "features.radius");
  positive(features.normal_radius, "features.normal_radius");
  if (!(features.context_radius >= 0)) throw ConfigError("features.context_radius must be non-negative");
  positive(features.context_normal_radius, "features.context_normal_radius");
  if (features.bins < 1) throw ConfigError("features.bins must be at least 1");
  if (match.K < 1) throw ConfigError("match.K must be at least 1");
  if (!(match.keep_fraction > 0 && match.keep_fraction <= 1)) throw ConfigError("match.keep_fraction must lie in (0, 1]");
  positive(match.sm.tau, "sm.tau");
  positive(match.sm.tol, "sm.tol");
  if (match.sm.max_iters < 1) throw ConfigError("sm.max_iters must be at least 1");
  if (point.sinkhorn_iters < 1) throw ConfigError("point.sinkhorn_iters must be at least 1");
  if (point.k < 1) throw ConfigError("point.k must be at least 1");
  positive(reg.accept_radius, "reg.accept_radius");
  if (reg.refine_iters < 0) throw ConfigError("reg.refine_iters must be non-negative");
  if (reg.ransac_iters < 1) throw ConfigError("reg.ransac_iters must be at least 1");
  positive(reg.ransac_threshold, "reg.ransac_threshold");
  positive(eval.ir_threshold, "eval.ir_threshold");
  positive(eval.rmse_threshold, "eval.rmse_threshold");
}

void PipelineConfig::write(std::ostream& out) const {
  for (const auto& key : keys()) out << key << '=' << get(key) << '\n';
}

Assignments parse_assignments(std::istream& in) {
  Assignments out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
    }
    out.emplace_back(std::string(key), std::string(value));
  }
  return out;
}

Assignments read_assignments(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_assignments(in);
}

PipelineConfig build_config(const Assignments& assignments) {
  double scale = 1.0;
  for (const auto& [key, value] : assignments) {
    if (key == "scale") scale = parse_number<double>(key, value);
  }
  PipelineConfig c = PipelineConfig::scaled(scale);
  for (const auto& [key, value] : assignments) {
    if (key != "scale") c.set(key, value);
  }
  c.validate();
  return c;
}

}  // namespace hybridreg
