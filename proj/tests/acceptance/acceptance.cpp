// Acceptance run: one PASS/FAIL line per criterion, measured values alongside.
// Exit status is the number of failed criteria; --report-only exits 0 once every
// criterion has been measured, so ctest tracks crashes while the lines carry the verdicts.
// --out FILE also writes the verdict lines there.

#include "oracles.hpp"

#include "hybridreg/ablation.hpp"
#include "hybridreg/errors.hpp"
#include "hybridreg/grid.hpp"
#include "hybridreg/kdtree.hpp"
#include "hybridreg/metrics.hpp"
#include "hybridreg/patch_matching.hpp"
#include "hybridreg/point_matching.hpp"
#include "hybridreg/registration.hpp"
#include "hybridreg/sampler.hpp"
#include "hybridreg/spectral.hpp"
#include "hybridreg/synth.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

using namespace hybridreg;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;
std::FILE* copy = nullptr;

void report(int id, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  if (copy) {
    std::fprintf(copy, "[%s] %d %s: %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(copy);
  }
  std::fflush(stdout);
  failures += pass ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

// Fraction of `from` (mapped by t) with a point of `to` within radius.
double matched_fraction(const std::vector<Point3>& from, const RigidTransform& t, const std::vector<Point3>& to,
                        double radius) {
  if (from.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& p : from) {
    const Point3 q = t.apply(p);
    for (const auto& c : to) {
      if ((c - q).norm() <= radius) {
        ++hit;
        break;
      }
    }
  }
  return static_cast<double>(hit) / static_cast<double>(from.size());
}

std::vector<Point3> gather(const PointCloud& c, const std::vector<std::size_t>& ids) {
  std::vector<Point3> out;
  for (auto i : ids) out.push_back(c.points[i]);
  return out;
}

// 1: salient points move with the cloud; under noise most of them survive.
void iss_repeatability() {
  const auto t0 = Clock::now();
  const SamplerConfig cfg;
  const double p2_cell = 0.05;
  std::mt19937_64 rng(101);
  std::normal_distribution<double> noise(0.0, 0.005);
  double worst_exact = 0.0;
  bool same_ids = true;
  std::size_t total = 0, kept = 0;
  for (std::uint64_t scene = 0; scene < 20; ++scene) {
    const auto p2 = grid_downsample(sample_scene(SceneRecipe::Room, 500 + scene), p2_cell);
    const auto t = oracle::random_rigid(rng, 1.0);
    const auto base = salient_points(p2, cfg);
    const auto moved_cloud = apply_transform(p2, t);
    const auto moved = salient_points(moved_cloud, cfg);
    same_ids &= moved == base;
    for (std::size_t k = 0; k < std::min(base.size(), moved.size()); ++k) {
      worst_exact = std::max(worst_exact, (t.apply(p2.points[base[k]]) - moved_cloud.points[moved[k]]).norm());
    }
    PointCloud noisy = moved_cloud;
    for (auto& p : noisy.points) p += Vec3(noise(rng), noise(rng), noise(rng));
    const auto noisy_ids = salient_points(noisy, cfg);
    const double f = matched_fraction(gather(p2, base), t, gather(noisy, noisy_ids), 2 * p2_cell);
    total += base.size();
    kept += static_cast<std::size_t>(std::lround(f * static_cast<double>(base.size())));
  }
  const double frac = static_cast<double>(kept) / static_cast<double>(total);
  const double secs = seconds_since(t0);
  report(1, "ISS/NMS repeatability", same_ids && worst_exact <= 1e-6 && frac >= 0.8 && secs < 10,
         fmt("noise-free ids identical=%s max offset %.2e m; sigma 0.005: %.1f%% of %zu salient points within 0.1 m; "
             "%.1f s",
             same_ids ? "yes" : "no", worst_exact, 100 * frac, total, secs));
}

// 2: spectral filter precision on planted sets and eigenvector against a dense solver.
void spectral_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> un(0, 1);
  std::normal_distribution<double> noise(0.0, 0.005);
  const SpectralConfig cfg;
  std::size_t kept_total = 0, kept_true = 0;
  double worst_dir = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 20 + rng() % 181;
    const auto inliers = static_cast<std::size_t>(std::ceil((0.3 + 0.6 * un(rng)) * static_cast<double>(n)));
    const auto t = oracle::random_rigid(rng, 1.0);
    const auto src = oracle::random_points(rng, n, -1.5, 1.5);
    std::vector<Point3> tgt;
    for (std::size_t i = 0; i < n; ++i) {
      tgt.push_back(i < inliers ? Point3(t.apply(src[i]) + Vec3(noise(rng), noise(rng), noise(rng)))
                                : oracle::random_points(rng, 1, -2.5, 2.5)[0]);
    }
    const auto res = spectral_filter(src, tgt, cfg);
    for (auto k : res.kept) {
      ++kept_total;
      kept_true += k < inliers;
    }
    const Eigen::MatrixXd m = compatibility(src, tgt, cfg.tau);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    const Eigen::VectorXd dense = eig.eigenvectors().col(m.rows() - 1);
    worst_dir = std::max(worst_dir, oracle::direction_error(principal_eigenvector(m, cfg.tol, cfg.max_iters).vector, dense));
  }
  const double precision = static_cast<double>(kept_true) / static_cast<double>(std::max<std::size_t>(kept_total, 1));
  const double secs = seconds_since(t0);
  report(2, "spectral matching oracle", precision >= 0.95 && worst_dir <= 1e-6 && secs < 30,
         fmt("200 trials: kept-set precision %.4f (%zu kept), max eigenvector deviation %.2e, %.1f s", precision,
             kept_total, worst_dir, secs));
}

// 3: Sinkhorn marginals and shift invariance.
void sinkhorn_contract() {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-1, 1);
  double worst_marginal = 0.0, worst_shift = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng() % 64), n = static_cast<Eigen::Index>(1 + rng() % 64);
    const Eigen::MatrixXd c = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return u(rng); });
    const double alpha = u(rng);
    const auto s = sinkhorn(c, alpha, 100);
    for (Eigen::Index i = 0; i < m; ++i) worst_marginal = std::max(worst_marginal, std::abs(s.entries.row(i).sum() - 1));
    for (Eigen::Index j = 0; j < n; ++j) worst_marginal = std::max(worst_marginal, std::abs(s.entries.col(j).sum() - 1));
    const double shift = 5 * u(rng);
    const auto shifted = sinkhorn((c.array() + shift).matrix(), alpha + shift, 100);
    worst_shift = std::max(worst_shift, (shifted.entries - s.entries).cwiseAbs().maxCoeff());
  }
  report(3, "Sinkhorn contract", worst_marginal < 1e-6 && worst_shift <= 1e-9,
         fmt("100 matrices up to 64x64: max marginal error %.2e, max change under a cost shift %.2e", worst_marginal,
             worst_shift));
}

// 4: Procrustes and LGR on planted correspondences.
void procrustes_lgr() {
  std::mt19937_64 rng(404);
  std::normal_distribution<double> g(0.0, 1.0);
  auto patches_for = [&](const RigidTransform& t, double sigma) {
    std::vector<std::vector<Correspondence>> patches;
    for (int p = 0; p < 20; ++p) {
      const Point3 centre = oracle::random_points(rng, 1, -1.5, 1.5)[0];
      std::vector<Correspondence> patch;
      for (const auto& off : oracle::random_points(rng, 10, -0.1, 0.1)) {
        const Point3 s = centre + off;
        patch.push_back({s, t.apply(s) + sigma * Vec3(g(rng), g(rng), g(rng)), 1.0});
      }
      patches.push_back(patch);
    }
    return patches;
  };
  double svd_rre = 0, svd_rte = 0, lgr_rre = 0, lgr_rte = 0;
  for (int k = 0; k < 50; ++k) {
    const auto t = oracle::random_rigid(rng, 2.0);
    const auto patches = patches_for(t, 0.0);
    std::vector<Correspondence> all;
    for (const auto& p : patches) all.insert(all.end(), p.begin(), p.end());
    const auto [r1, t1] = rre_rte(weighted_svd(all), t);
    const auto [r2, t2] = rre_rte(lgr(patches, 0.1, 5).transform, t);
    svd_rre = std::max(svd_rre, r1);
    svd_rte = std::max(svd_rte, t1);
    lgr_rre = std::max(lgr_rre, r2);
    lgr_rte = std::max(lgr_rte, t2);
  }
  std::vector<double> rres, rtes;
  for (int k = 0; k < 50; ++k) {
    const auto t = oracle::random_rigid(rng, 2.0);
    const auto [r, tr] = rre_rte(lgr(patches_for(t, 0.01), 0.1, 5).transform, t);
    rres.push_back(r);
    rtes.push_back(tr);
  }
  const double med_rre = median(rres), med_rte = median(rtes);
  const bool exact = std::max(svd_rre, lgr_rre) < 1e-6 && std::max(svd_rte, lgr_rte) < 1e-9;
  report(4, "Procrustes and LGR", exact && med_rre < 0.5 && med_rte < 0.02,
         fmt("noise-free max RRE %.2e deg, RTE %.2e m (svd) / %.2e deg, %.2e m (lgr); sigma 0.01 over 50 pairs: "
             "median RRE %.3f deg, RTE %.4f m",
             svd_rre, svd_rte, lgr_rre, lgr_rte, med_rre, med_rte));
}

const ConfigurationReport& find(const SuiteReport& r, const std::string& name) {
  for (const auto& c : r.configurations) {
    if (c.variant.name == name) return c;
  }
  throw Error("no configuration " + name);
}

std::string row(const ConfigurationReport& c) {
  return fmt("%s RR %.0f%% IR %.1f%%", c.variant.name.c_str(), 100 * c.summary.rr, 100 * c.summary.mean_ir);
}

// 9: fast paths against exhaustive scans.
void brute_force_agreement() {
  std::mt19937_64 rng(909);
  std::size_t instances = 0, mismatches = 0;
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 1000;
    auto pts = oracle::random_points(rng, n, 0, 1);
    for (std::size_t k = 0; k < n / 10; ++k) pts[rng() % n] = pts[rng() % n];  // duplicates
    const KdTree tree(pts);
    for (int q = 0; q < 20; ++q) {
      const Point3 query = oracle::random_points(rng, 1, -0.1, 1.1)[0];
      const double r = 0.3 * u(rng);
      const auto got = tree.radius(query, r);
      const auto expected = oracle::radius_scan(pts, query, r, false);
      ++instances;
      bool same = got.size() == expected.size();
      for (std::size_t k = 0; same && k < got.size(); ++k) same = got[k].index == expected[k].index;
      const auto near = tree.nearest(query);
      same &= near.index == oracle::nearest_scan(pts, query);
      mismatches += same ? 0 : 1;
    }
    // grouping
    PointCloud dense;
    dense.points = pts;
    const std::size_t k = 1 + rng() % 40;
    auto nodes = HybridNodes::single_class(oracle::random_points(rng, k, 0, 1), NodeClass::NonSalient);
    const auto part = point_to_node_group(dense, nodes);
    ++instances;
    bool same = true;
    for (std::size_t i = 0; i < n; ++i) same &= part.node_of[i] == oracle::nearest_scan(nodes.non_salient, pts[i]);
    mismatches += same ? 0 : 1;
  }
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng() % 31), n = static_cast<Eigen::Index>(1 + rng() % 31);
    const bool coarse = trial % 2 == 0;  // coarse values force ties
    const Eigen::MatrixXd c =
        Eigen::MatrixXd::NullaryExpr(m, n, [&] { return coarse ? std::round(u(rng) * 5) / 5 : u(rng); });
    const std::size_t k = 1 + rng() % static_cast<std::size_t>(m * n);
    const auto top = top_k_matches(c, k);
    const auto expected = oracle::sorted_entries(c, k);
    bool same = top.size() == expected.size();
    for (std::size_t i = 0; same && i < top.size(); ++i) {
      same = top[i].source == expected[i].source && top[i].target == expected[i].target;
    }
    ++instances;
    mismatches += same ? 0 : 1;

    AssignmentMatrix s;
    s.entries = Eigen::MatrixXd::NullaryExpr(m + 1, n + 1, [&] { return coarse ? std::round(u(rng) * 5) / 5 : u(rng); });
    const std::size_t kk = 1 + rng() % 4;
    ++instances;
    mismatches += mutual_top_k(s, kk) == oracle::mutual_rank_scan(s.inner(), kk) ? 0 : 1;
  }
  report(9, "brute-force agreement", mismatches == 0,
         fmt("%zu randomized instances (index, grouping, top-K, mutual top-k), %zu mismatches", instances,
             mismatches));
}

}  // namespace

int main(int argc, char** argv) {
  bool report_only = false;
  for (int a = 1; a < argc; ++a) {
    const std::string_view arg = argv[a];
    if (arg == "--report-only") {
      report_only = true;
    } else if (arg == "--out" && a + 1 < argc) {
      copy = std::fopen(argv[++a], "w");
      if (!copy) {
        std::fprintf(stderr, "cannot write %s\n", argv[a]);
        return 1;
      }
    } else {
      std::fprintf(stderr, "usage: acceptance [--report-only] [--out FILE]\n");
      return 1;
    }
  }
  std::printf("acceptance: property checks\n");
  iss_repeatability();
  spectral_oracle();
  sinkhorn_contract();
  procrustes_lgr();

  const PipelineConfig cfg;
  const SuiteSpec rooms;  // 50 room pairs, overlap 0.3 to 0.7, noise 0.005

  std::printf("acceptance: end-to-end suite (%zu pairs)\n", rooms.pairs);
  std::fflush(stdout);
  auto t0 = Clock::now();
  const auto eval = evaluate_suite(rooms, cfg);
  const double secs = seconds_since(t0);
  const auto& s = eval.configurations.front().summary;
  report(5, "end-to-end synthetic suite", s.rr >= 0.9 && s.median_rre < 2.0 && s.median_rte < 0.05 && secs < 300,
         fmt("RR %.1f%% (%zu/%zu), median RRE %.3f deg, median RTE %.4f m, IR %.1f%%, %.0f s", 100 * s.rr, s.successes,
             s.pairs, s.median_rre, s.median_rte, 100 * s.mean_ir, secs));

  // The full method is both the last node-choice row and the sm-non-salient row; it was
  // just measured, so only the other variants run again on the same pairs.
  std::printf("acceptance: ablations on the same suite\n");
  std::fflush(stdout);
  auto variants = ablation_variants(AblationMode::NodeChoice);
  variants.pop_back();
  for (const auto& v : ablation_variants(AblationMode::SmPlacement)) {
    if (v.name == "sm-both") variants.push_back(v);
  }
  const auto ablation = run_suite(rooms, cfg, variants);
  const auto& full = eval.configurations.front();
  const auto& grid = find(ablation, "grid-superpoint");
  const auto& sal = find(ablation, "salient-only");
  const auto& nonsal = find(ablation, "non-salient-only");
  const auto& hybrid = find(ablation, "hybrid");
  const auto& both = find(ablation, "sm-both");
  const double gap = 100 * (sal.summary.mean_ir - nonsal.summary.mean_ir);
  report(6, "node-choice ablation", full.summary.rr >= grid.summary.rr && gap >= 10,
         fmt("%s | %s | %s | %s | %s; salient minus non-salient IR %.1f points", row(grid).c_str(),
             row(nonsal).c_str(), row(sal).c_str(), row(hybrid).c_str(), row(full).c_str(), gap));
  report(7, "spectral-matching placement", full.summary.rr >= both.summary.rr && both.summary.mean_ir >= full.summary.mean_ir,
         fmt("sm-non-salient RR %.0f%% IR %.1f%% | sm-both RR %.0f%% IR %.1f%%", 100 * full.summary.rr,
             100 * full.summary.mean_ir, 100 * both.summary.rr, 100 * both.summary.mean_ir));

  SuiteSpec planes;
  planes.recipe = SceneRecipe::PlaneDominant;
  planes.pairs = 10;
  std::printf("acceptance: plane-dominant pairs\n");
  std::fflush(stdout);
  const std::vector<PipelineVariant> plane_variants = {ablation_variants(AblationMode::NodeChoice)[2],
                                                       ablation_variants(AblationMode::NodeChoice)[3]};
  const auto plane = run_suite(planes, cfg, plane_variants);
  const auto& p_sal = find(plane, "salient-only").summary;
  const auto& p_hyb = find(plane, "hybrid").summary;
  report(8, "plane-dominant scenes", p_hyb.successes >= p_sal.successes + 3,
         fmt("hybrid registers %zu/10, salient-only %zu/10", p_hyb.successes, p_sal.successes));

  brute_force_agreement();
  std::printf("acceptance: %d of 9 criteria failed\n", failures);
  if (copy) {
    std::fprintf(copy, "%d of 9 criteria failed\n", failures);
    std::fclose(copy);
  }
  return report_only ? 0 : failures;
}
