#include "hybridreg/report.hpp"

#include "hybridreg/cloud_io.hpp"
#include "hybridreg/errors.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace hybridreg {
namespace {

nlohmann::json number(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

double number_or(const nlohmann::json& j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

std::string node_mode_name(NodeMode m) {
  switch (m) {
    case NodeMode::GridSuperpoint: return "grid-superpoint";
    case NodeMode::NonSalientOnly: return "non-salient-only";
    case NodeMode::SalientOnly: return "salient-only";
    case NodeMode::Hybrid: return "hybrid";
  }
  return "hybrid";
}

std::string fixed(double v, int precision) {
  if (!std::isfinite(v)) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
  return buf;
}

}  // namespace

nlohmann::json to_json(const PairEvaluation& e) {
  return {{"name", e.name},
          {"registered", e.registered},
          {"ir", e.ir},
          {"ir_empty", e.ir_empty},
          {"rre", number(e.rre)},
          {"rte", number(e.rte)},
          {"rmse", number(e.rmse)},
          {"fmr_success", e.fmr_success},
          {"rr_success", e.rr_success},
          {"correspondences", e.correspondences}};
}

nlohmann::json to_json(const PipelineCounts& c) {
  return {{"salient_source", c.salient_source},
          {"non_salient_source", c.non_salient_source},
          {"salient_target", c.salient_target},
          {"non_salient_target", c.non_salient_target},
          {"c1", c.c1},
          {"c2", c.c2},
          {"c2_star", c.c2_star},
          {"c", c.c},
          {"point_correspondences", c.point_correspondences},
          {"used_correspondences", c.used_correspondences}};
}

nlohmann::json to_json(const BenchmarkSummary& s) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : s.records) records.push_back(to_json(r));
  return {{"pairs", s.pairs},
          {"successes", s.successes},
          {"rr", s.rr},
          {"fmr", s.fmr},
          {"mean_ir", s.mean_ir},
          {"median_rre", number(s.median_rre)},
          {"median_rte", number(s.median_rte)},
          {"records", records}};
}

nlohmann::json to_json(const SuiteReport& r) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& key : PipelineConfig::keys()) config[key] = r.config.get(key);
  nlohmann::json suite = {{"recipe", to_string(r.suite.recipe)},
                          {"pairs", r.suite.pairs},
                          {"seed", r.suite.seed},
                          {"min_overlap", r.suite.min_overlap},
                          {"max_overlap", r.suite.max_overlap},
                          {"noise_sigma", r.suite.noise_sigma},
                          {"max_angle_deg", r.suite.max_angle_deg},
                          {"max_translation", r.suite.max_translation},
                          {"spacing", r.suite.spacing}};
  nlohmann::json configurations = nlohmann::json::array();
  for (const auto& c : r.configurations) {
    auto summary = to_json(c.summary);
    for (std::size_t i = 0; i < c.counts.size() && i < summary["records"].size(); ++i) {
      summary["records"][i]["counts"] = to_json(c.counts[i]);
    }
    configurations.push_back({{"name", c.variant.name},
                              {"nodes", node_mode_name(c.variant.nodes)},
                              {"split_classes", c.variant.split_classes},
                              {"sm_salient", c.variant.sm_salient},
                              {"sm_non_salient", c.variant.sm_non_salient},
                              {"summary", summary}});
  }
  return {{"mode", r.mode},
          {"correspondence_cap", r.config.eval.max_correspondences},
          {"suite", suite},
          {"config", config},
          {"configurations", configurations}};
}

std::vector<PairEvaluation> records_from_json(const nlohmann::json& configuration) {
  const auto inf = std::numeric_limits<double>::infinity();
  std::vector<PairEvaluation> out;
  for (const auto& j : configuration.at("summary").at("records")) {
    PairEvaluation e;
    e.name = j.at("name").get<std::string>();
    e.registered = j.at("registered").get<bool>();
    e.ir = j.at("ir").get<double>();
    e.ir_empty = j.at("ir_empty").get<bool>();
    e.rre = number_or(j.at("rre"), 180.0);
    e.rte = number_or(j.at("rte"), inf);
    e.rmse = number_or(j.at("rmse"), inf);
    e.fmr_success = j.at("fmr_success").get<bool>();
    e.rr_success = j.at("rr_success").get<bool>();
    e.correspondences = j.at("correspondences").get<std::size_t>();
    out.push_back(std::move(e));
  }
  return out;
}

void write_summary_table(const SuiteReport& r, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof(line), "%-18s %6s %7s %7s %8s %8s %9s\n", "configuration", "pairs", "RR(%)", "FMR(%)",
                "IR(%)", "RRE(deg)", "RTE(m)");
  out << line;
  for (const auto& c : r.configurations) {
    const auto& s = c.summary;
    std::snprintf(line, sizeof(line), "%-18s %6zu %7s %7s %8s %8s %9s\n", c.variant.name.c_str(), s.pairs,
                  fixed(100 * s.rr, 1).c_str(), fixed(100 * s.fmr, 1).c_str(), fixed(100 * s.mean_ir, 1).c_str(),
                  fixed(s.median_rre, 3).c_str(), fixed(s.median_rte, 4).c_str());
    out << line;
  }
}

void write_transform(const RigidTransform& t, std::ostream& out) {
  const Mat4 m = t.matrix();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out << (j ? " " : "") << format_double(m(i, j));
    out << '\n';
  }
}

RigidTransform read_transform(std::istream& in) {
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (!(in >> m(i, j))) throw ParseError("transform: expected 16 numbers");
    }
  }
  return RigidTransform::from_matrix(m);
}

}  // namespace hybridreg
