#include "hybridreg/ablation.hpp"
#include "hybridreg/cloud_io.hpp"
#include "hybridreg/config.hpp"
#include "hybridreg/errors.hpp"
#include "hybridreg/pipeline.hpp"
#include "hybridreg/report.hpp"
#include "hybridreg/synth.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

namespace fs = std::filesystem;
using namespace hybridreg;

namespace {

struct SuiteOptions {
  std::string recipe = "room";
  SuiteSpec spec;
};

void add_suite_options(CLI::App* cmd, SuiteOptions& o) {
  cmd->add_option("--recipe", o.recipe, "Scene recipe: room, two-rooms, plane-dominant")->capture_default_str();
  cmd->add_option("--pairs", o.spec.pairs, "Number of pairs")->capture_default_str();
  cmd->add_option("--seed", o.spec.seed, "Suite seed")->capture_default_str();
  cmd->add_option("--min-overlap", o.spec.min_overlap)->capture_default_str();
  cmd->add_option("--max-overlap", o.spec.max_overlap)->capture_default_str();
  cmd->add_option("--noise", o.spec.noise_sigma, "Gaussian noise sigma")->capture_default_str();
  cmd->add_option("--max-angle", o.spec.max_angle_deg, "Largest rotation in degrees")->capture_default_str();
  cmd->add_option("--max-translation", o.spec.max_translation)->capture_default_str();
  cmd->add_option("--spacing", o.spec.spacing, "Surface sample spacing")->capture_default_str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

void emit_report(const SuiteReport& report, const std::string& json_path, const std::string& summary_path) {
  std::ostringstream table;
  write_summary_table(report, table);
  std::cout << table.str();
  if (!json_path.empty()) write_text(json_path, to_json(report).dump(2) + "\n");
  if (!summary_path.empty()) write_text(summary_path, table.str());
}

ProgressFn stderr_progress() {
  return [](std::size_t done, std::size_t total) {
    std::cerr << "\r" << done << "/" << total << " pairs" << (done == total ? "\n" : "") << std::flush;
  };
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Point-cloud registration with hybrid salient / non-salient nodes"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
  std::map<std::string, std::string> overrides;
  for (const auto& key : PipelineConfig::keys()) {
    app.add_option("--" + key, overrides[key], "Override config key " + key)->group("Config overrides");
  }
  auto config = [&]() {
    Assignments a;
    if (!config_path.empty()) a = read_assignments(config_path);
    for (const auto& key : PipelineConfig::keys()) {
      if (app.count("--" + key) > 0) a.emplace_back(key, overrides[key]);
    }
    return build_config(a);
  };

  // synth
  auto* synth = app.add_subcommand("synth", "Write a synthetic pair and its ground truth");
  std::string recipe = "room", out_dir = ".", format = "ply";
  double overlap = 0.5, noise = 0.005, max_angle = 60.0, max_translation = 0.5, spacing = 0.015;
  std::uint64_t seed = 1;
  synth->add_option("--recipe", recipe)->capture_default_str();
  synth->add_option("--overlap", overlap)->capture_default_str();
  synth->add_option("--noise", noise)->capture_default_str();
  synth->add_option("--seed", seed)->capture_default_str();
  synth->add_option("--max-angle", max_angle)->capture_default_str();
  synth->add_option("--max-translation", max_translation)->capture_default_str();
  synth->add_option("--spacing", spacing)->capture_default_str();
  synth->add_option("--out-dir", out_dir)->capture_default_str();
  synth->add_option("--format", format, "ply, ply-ascii or xyz")->capture_default_str();

  // sample
  auto* sample = app.add_subcommand("sample", "Extract hybrid nodes from a cloud");
  std::string sample_in, sample_out, features_out;
  sample->add_option("--input", sample_in)->required()->check(CLI::ExistingFile);
  sample->add_option("--out", sample_out, "Nodes as 'x y z class' lines")->required();
  sample->add_option("--features-out", features_out, "Dense-point descriptors, one row per point");

  // register
  auto* reg = app.add_subcommand("register", "Estimate the transform mapping source onto target");
  std::string reg_source, reg_target, reg_out, reg_report;
  reg->add_option("--source", reg_source)->required()->check(CLI::ExistingFile);
  reg->add_option("--target", reg_target)->required()->check(CLI::ExistingFile);
  reg->add_option("--out", reg_out, "4x4 row-major transform")->required();
  reg->add_option("--report", reg_report, "JSON with intermediate counts");

  // eval
  auto* eval = app.add_subcommand("eval", "Run the pipeline over a synthetic suite");
  SuiteOptions eval_opts;
  std::string eval_json, eval_summary;
  add_suite_options(eval, eval_opts);
  eval->add_option("--out", eval_json, "JSON report");
  eval->add_option("--summary", eval_summary, "Plain-text summary table");

  // ablate
  auto* ablate = app.add_subcommand("ablate", "Compare node choices or spectral-matching placements");
  SuiteOptions ablate_opts;
  std::string mode = "node-choice", ablate_json, ablate_summary;
  add_suite_options(ablate, ablate_opts);
  ablate->add_option("--mode", mode, "node-choice or sm-placement")->capture_default_str();
  ablate->add_option("--out", ablate_json, "JSON report");
  ablate->add_option("--summary", ablate_summary, "Plain-text summary table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const auto parsed = parse_recipe(recipe);
      std::mt19937_64 rng(seed);
      const auto t = random_transform(rng, max_angle, max_translation);
      const auto pair = synth_pair(parsed, t, overlap, noise, seed, spacing);
      CloudFormat fmt = CloudFormat::PlyBinary;
      std::string ext = ".ply";
      if (format == "ply-ascii") {
        fmt = CloudFormat::PlyAscii;
      } else if (format == "xyz") {
        fmt = CloudFormat::Xyz;
        ext = ".xyz";
      } else if (format != "ply") {
        throw ConfigError("unknown format '" + format + "'");
      }
      fs::create_directories(out_dir);
      save_cloud(pair.source, fs::path(out_dir) / ("source" + ext), fmt);
      save_cloud(pair.target, fs::path(out_dir) / ("target" + ext), fmt);
      std::ostringstream gt;
      write_transform(pair.t_gt, gt);
      write_text(fs::path(out_dir) / "gt.txt", gt.str());
      const nlohmann::json meta = {{"recipe", recipe},         {"seed", seed},
                                   {"overlap", pair.gt_overlap}, {"noise_sigma", noise},
                                   {"source_points", pair.source.size()}, {"target_points", pair.target.size()}};
      write_text(fs::path(out_dir) / "pair.json", meta.dump(2) + "\n");
      std::cout << "source " << pair.source.size() << " points, target " << pair.target.size()
                << " points, overlap " << pair.gt_overlap << "\n";
    } else if (*sample) {
      const auto cfg = config();
      const auto fragment = prepare_fragment(load_cloud(sample_in), cfg);
      std::ostringstream out;
      const auto& nodes = fragment.hybrid;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& p = nodes.position(i);
        out << format_double(p.x()) << ' ' << format_double(p.y()) << ' ' << format_double(p.z()) << ' '
            << (nodes.label(i) == NodeClass::Salient ? "salient" : "non-salient") << '\n';
      }
      write_text(sample_out, out.str());
      if (!features_out.empty()) {
        std::ofstream f(features_out);
        if (!f) throw Error("cannot write " + features_out);
        write_features(fragment.features, f);
      }
      std::cout << nodes.salient.size() << " salient, " << nodes.non_salient.size() << " non-salient nodes\n";
    } else if (*reg) {
      const auto cfg = config();
      const auto match = register_clouds(load_cloud(reg_source), load_cloud(reg_target), cfg);
      if (!reg_report.empty()) {
        nlohmann::json j = {{"registered", match.registered},
                            {"failure", match.failure},
                            {"inliers", match.result.inliers.size()},
                            {"counts", to_json(match.counts)}};
        write_text(reg_report, j.dump(2) + "\n");
      }
      if (!match.registered) {
        std::cerr << "registration failed: " << match.failure << "\n";
        return 2;
      }
      std::ostringstream t;
      write_transform(match.result.transform, t);
      write_text(reg_out, t.str());
      std::cout << t.str();
    } else if (*eval) {
      eval_opts.spec.recipe = parse_recipe(eval_opts.recipe);
      const auto report = evaluate_suite(eval_opts.spec, config(), stderr_progress());
      emit_report(report, eval_json, eval_summary);
    } else if (*ablate) {
      ablate_opts.spec.recipe = parse_recipe(ablate_opts.recipe);
      const auto report = ablation_suite(parse_ablation_mode(mode), ablate_opts.spec, config(), stderr_progress());
      emit_report(report, ablate_json, ablate_summary);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
