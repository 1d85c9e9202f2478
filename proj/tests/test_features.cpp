#include "oracles.hpp"

#include "hybridreg/errors.hpp"
#include "hybridreg/features.hpp"
#include "hybridreg/grid.hpp"
#include "hybridreg/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

using namespace hybridreg;

namespace {

PointCloud fibonacci_sphere(std::size_t n) {
  PointCloud c;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (std::size_t i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    double rho = std::sqrt(1.0 - z * z);
    double a = golden * static_cast<double>(i);
    c.points.emplace_back(rho * std::cos(a), rho * std::sin(a), z);
  }
  return c;
}

// Small irregular scene with curved and flat parts, normals estimated.
PointCloud test_scene() {
  auto scene = grid_downsample(sample_scene(SceneRecipe::Room, 4), 0.05);
  return estimate_normals(scene, 0.075).cloud;
}

}  // namespace

TEST_CASE("normals of a plane point up") {
  PointCloud plane;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) plane.points.emplace_back(i * 0.02, j * 0.02, 0.3);
  auto est = estimate_normals(plane, 0.05);
  for (std::size_t i = 0; i < plane.size(); ++i) {
    CHECK(est.degenerate[i] == 0);
    CHECK((est.cloud.normals[i] - Vec3::UnitZ()).norm() < 1e-9);
  }
  // vertical plane x = const: tie on z, resolved toward +x
  PointCloud wall;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) wall.points.emplace_back(1.0, i * 0.02, j * 0.02);
  auto w = estimate_normals(wall, 0.05);
  CHECK((w.cloud.normals[150] - Vec3::UnitX()).norm() < 1e-9);
}

TEST_CASE("normals of a sphere are radial") {
  auto sphere = fibonacci_sphere(4000);
  auto est = estimate_normals(sphere, 0.15);
  double worst = 0.0;
  for (std::size_t i = 0; i < sphere.size(); ++i) {
    double c = std::abs(est.cloud.normals[i].dot(sphere.points[i].normalized()));
    worst = std::max(worst, std::acos(std::min(1.0, c)) * 180.0 / std::numbers::pi);
  }
  CHECK(worst < 5.0);
}

TEST_CASE("normals with too few neighbours are flagged") {
  PointCloud two;
  two.points = {Point3(0, 0, 0), Point3(0.01, 0, 0)};
  auto est = estimate_normals(two, 0.1);
  CHECK(est.degenerate == std::vector<char>{1, 1});
  CHECK(est.cloud.normals[0] == Vec3::UnitZ());
  CHECK_THROWS_AS(estimate_normals(two, 0.0), ConfigError);
}

TEST_CASE("descriptors are unit norm and finite") {
  auto cloud = test_scene();
  DescriptorEstimator est(cloud, 0.125);
  CHECK(est.dim() == 33);
  auto fs = est.describe_all();
  REQUIRE(fs.size() == cloud.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) worst = std::max(worst, std::abs(fs.row(i).norm() - 1.0));
  CHECK(worst < 1e-6);
  CHECK(fs.values.allFinite());
  // describe() and describe_all() agree
  for (std::size_t i : {0ul, 17ul, cloud.size() - 1}) CHECK((est.describe(i).first - fs.row(i)).norm() < 1e-12);
}

TEST_CASE("descriptor invariance") {
  auto cloud = test_scene();
  auto base = DescriptorEstimator(cloud, 0.125).describe_all();

  SUBCASE("rigid motion") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 3; ++trial) {
      auto t = oracle::random_rigid(rng, 3.0);
      auto moved = DescriptorEstimator(apply_transform(cloud, t), 0.125).describe_all();
      CHECK((moved.values - base.values).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
  SUBCASE("flipped normals") {
    PointCloud flipped = cloud;
    for (std::size_t i = 0; i < flipped.size(); i += 2) flipped.normals[i] = -flipped.normals[i];
    auto f = DescriptorEstimator(flipped, 0.125).describe_all();
    CHECK((f.values - base.values).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("point order") {
    std::vector<std::size_t> perm(cloud.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937_64 rng(1);
    std::shuffle(perm.begin(), perm.end(), rng);
    PointCloud shuffled;
    for (auto p : perm) {
      shuffled.points.push_back(cloud.points[p]);
      shuffled.normals.push_back(cloud.normals[p]);
    }
    auto s = DescriptorEstimator(shuffled, 0.125).describe_all();
    double worst = 0.0;
    for (std::size_t k = 0; k < perm.size(); ++k) worst = std::max(worst, (s.row(k) - base.row(perm[k])).norm());
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("isolated point gets the flagged uniform descriptor") {
  PointCloud c;
  c.points = {Point3(0, 0, 0), Point3(5, 0, 0)};
  c.normals = {Vec3::UnitZ(), Vec3::UnitZ()};
  auto [d, flagged] = DescriptorEstimator(c, 0.1).describe(0);
  CHECK(flagged);
  CHECK((d - Descriptor::Constant(33, 1.0 / std::sqrt(33.0))).norm() < 1e-15);
  CHECK(DescriptorEstimator(c, 0.1).describe_all().degenerate == std::vector<char>{1, 1});

  PointCloud no_normals;
  no_normals.points = c.points;
  CHECK_THROWS_AS(DescriptorEstimator(no_normals, 0.1), Error);
}

TEST_CASE("node descriptor") {
  Descriptor e1 = Descriptor::Unit(33, 0), e2 = Descriptor::Unit(33, 1);
  std::vector<Descriptor> one = {e1};
  CHECK(node_descriptor(one) == e1);
  std::vector<Descriptor> twice = {e1, e1};
  CHECK((node_descriptor(twice) - e1).norm() < 1e-15);
  std::vector<Descriptor> both = {e1, e2};
  CHECK((node_descriptor(both) - (e1 + e2) / std::sqrt(2.0)).norm() < 1e-15);
  std::vector<Descriptor> swapped = {e2, e1};
  CHECK(node_descriptor(swapped) == node_descriptor(both));
  CHECK_THROWS_AS(node_descriptor(std::vector<Descriptor>{}), EmptyInputError);

  FeatureSet fs;
  fs.values.resize(2, 33);
  fs.values.row(0) = e1.transpose();
  fs.values.row(1) = e2.transpose();
  std::vector<std::size_t> ids = {1, 0};
  CHECK((node_descriptor(fs, ids) - (e1 + e2) / std::sqrt(2.0)).norm() < 1e-15);
  CHECK(fs.subset(ids).row(0) == e2);
}

TEST_CASE("feature export") {
  FeatureSet fs;
  fs.values = Eigen::MatrixXd::Identity(2, 3);
  std::ostringstream out;
  write_features(fs, out);
  CHECK(out.str() == "1 0 0\n0 1 0\n");
}

TEST_CASE("matching features against a direct recomputation") {
  auto dense = test_scene();
  auto raw = grid_downsample(sample_scene(SceneRecipe::Room, 4), 0.1);
  FeatureConfig cfg;
  cfg.context_radius = 0.4;
  cfg.context_normal_radius = 0.2;
  auto mf = matching_features(dense, raw, cfg);
  REQUIRE(mf.size() == dense.size());
  CHECK(mf.dim() == 66);

  // Oracle: square root, subtract the mean, rescale, per block; brute-force nearest coarse point.
  auto block = [](const Descriptor& h) {
    Eigen::VectorXd s = h.cwiseSqrt();
    s.array() -= s.sum() / static_cast<double>(s.size());
    return Eigen::VectorXd(s / s.norm());
  };
  DescriptorEstimator fine(dense, cfg.radius);
  auto coarse = estimate_normals(raw, cfg.context_normal_radius).cloud;
  DescriptorEstimator ctx(coarse, cfg.context_radius);
  for (std::size_t i : {0ul, 101ul, 777ul, dense.size() - 1}) {
    std::size_t near = 0;
    for (std::size_t j = 1; j < coarse.size(); ++j)
      if ((coarse.points[j] - dense.points[i]).norm() < (coarse.points[near] - dense.points[i]).norm()) near = j;
    Eigen::VectorXd expected(66);
    expected << block(fine.describe(i).first), block(ctx.describe(near).first);
    expected.normalize();
    CHECK((mf.row(i) - expected).norm() < 1e-9);
  }
  for (std::size_t i = 0; i < mf.size(); ++i) {
    CHECK(mf.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(mf.row(i).head(33).sum()) < 1e-9);
    CHECK(std::abs(mf.row(i).tail(33).sum()) < 1e-9);
  }

  cfg.context_radius = 0.0;
  auto only_fine = matching_features(dense, PointCloud{}, cfg);
  CHECK(only_fine.dim() == 33);
  CHECK((only_fine.row(5) - block(fine.describe(5).first)).norm() < 1e-9);
}

TEST_CASE("matching features are rigid invariant and flag empty support") {
  auto dense = test_scene();
  auto raw = grid_downsample(sample_scene(SceneRecipe::Room, 4), 0.1);
  FeatureConfig cfg;
  cfg.context_normal_radius = 0.2;  // every coarse point needs a real normal for exact invariance
  auto base = matching_features(dense, raw, cfg);
  std::mt19937_64 rng(9);
  auto t = oracle::random_rigid(rng, 2.0);
  auto moved = matching_features(apply_transform(dense, t), apply_transform(raw, t), cfg);
  CHECK((moved.values - base.values).cwiseAbs().maxCoeff() < 1e-6);

  PointCloud lonely;
  lonely.points = {Point3(0, 0, 0), Point3(5, 0, 0)};
  lonely.normals = {Vec3::UnitZ(), Vec3::UnitZ()};
  auto f = matching_features(lonely, lonely, cfg);
  CHECK(f.degenerate == std::vector<char>{1, 1});
  CHECK(f.values.isZero());
  CHECK_THROWS_AS(matching_features(lonely, PointCloud{}, cfg), EmptyInputError);
}
