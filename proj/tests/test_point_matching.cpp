#include "oracles.hpp"

#include "hybridreg/errors.hpp"
#include "hybridreg/point_matching.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hybridreg;

namespace {

// Closed-form fixed point of 2x2 matrix scaling: P = diag(u) K diag(v) with row sums a and
// column sums b. With x = P00 the cross ratio P00 P11 / (P01 P10) equals that of K, which
// leaves one quadratic in x; the root inside the feasible interval is the answer.
Eigen::Matrix2d scaling_2x2(const Eigen::Matrix2d& k, Eigen::Vector2d a, Eigen::Vector2d b) {
  const double rho = k(0, 0) * k(1, 1) / (k(0, 1) * k(1, 0));
  // x (a1 - b0 + x) = rho (a0 - x)(b0 - x)
  const double qa = 1.0 - rho;
  const double qb = (a[1] - b[0]) + rho * (a[0] + b[0]);
  const double qc = -rho * a[0] * b[0];
  double x;
  if (std::abs(qa) < 1e-14) {
    x = -qc / qb;
  } else {
    const double disc = std::sqrt(qb * qb - 4 * qa * qc);
    const double r1 = (-qb + disc) / (2 * qa), r2 = (-qb - disc) / (2 * qa);
    const double lo = std::max(0.0, b[0] - a[1]), hi = std::min(a[0], b[0]);
    x = (r1 > lo && r1 < hi) ? r1 : r2;
  }
  Eigen::Matrix2d p;
  p << x, a[0] - x, b[0] - x, a[1] - b[0] + x;
  return p;
}

double marginal_error(const AssignmentMatrix& s) {
  const Eigen::Index m = s.inner_rows(), n = s.inner_cols();
  Eigen::VectorXd rows = s.entries.rowwise().sum();
  Eigen::RowVectorXd cols = s.entries.colwise().sum();
  double err = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) err = std::max(err, std::abs(rows[i] - 1.0));
  for (Eigen::Index j = 0; j < n; ++j) err = std::max(err, std::abs(cols[j] - 1.0));
  return err;
}

}  // namespace

TEST_CASE("patch cost") {
  FeatureSet e1;
  e1.values = Eigen::MatrixXd::Zero(1, 33);
  e1.values(0, 0) = 1.0;
  auto c = patch_cost(e1, e1, NodeClass::Salient);
  CHECK(c.entries(0, 0) == doctest::Approx(1.0 / std::sqrt(33.0)).epsilon(1e-15));
  CHECK(c.cls == NodeClass::Salient);

  FeatureSet e2 = e1;
  e2.values(0, 0) = 0.0;
  e2.values(0, 5) = 1.0;
  CHECK(patch_cost(e1, e2, NodeClass::NonSalient).entries(0, 0) == 0.0);

  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0, 1);
  FeatureSet a, b;
  a.values = Eigen::MatrixXd::NullaryExpr(20, 33, [&] { return g(rng); });
  b.values = Eigen::MatrixXd::NullaryExpr(15, 33, [&] { return g(rng); });
  a.values.rowwise().normalize();
  b.values.rowwise().normalize();
  CHECK(patch_cost(a, b, NodeClass::Salient).entries.cwiseAbs().maxCoeff() <= 1.0 / std::sqrt(33.0) + 1e-15);

  CHECK_THROWS_AS(patch_cost(FeatureSet{}, a, NodeClass::Salient), EmptyInputError);
  FeatureSet narrow;
  narrow.values = Eigen::MatrixXd::Ones(2, 3);
  CHECK_THROWS_AS(patch_cost(a, narrow, NodeClass::Salient), Error);
}

TEST_CASE("sinkhorn 1x1 against the closed-form 2x2 fixed point") {
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 1);
  auto s = sinkhorn(zero, 0.0, 100);
  CHECK((s.entries - Eigen::MatrixXd::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd c(1, 1);
    c(0, 0) = u(rng);
    double alpha = u(rng);
    Eigen::Matrix2d k;
    k << std::exp(c(0, 0)), std::exp(alpha), std::exp(alpha), std::exp(alpha);
    auto expected = scaling_2x2(k, Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 1));
    CHECK((sinkhorn(c, alpha, 200).entries - expected).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("sinkhorn uniform cost gives a uniform inner block") {
  for (double alpha : {-1.0, 0.0, 2.0}) {
    auto s = sinkhorn(Eigen::MatrixXd::Constant(4, 7, 0.3), alpha, 100);
    auto inner = s.inner();
    CHECK(inner.maxCoeff() - inner.minCoeff() < 1e-12);
  }
}

TEST_CASE("sinkhorn marginals, sign and shift invariance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 64), n = 1 + static_cast<Eigen::Index>(rng() % 64);
    Eigen::MatrixXd c = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return u(rng); });
    double alpha = u(rng);
    auto s = sinkhorn(c, alpha, 100);
    CHECK(marginal_error(s) < 1e-6);
    CHECK(s.entries.minCoeff() >= 0.0);
    // dustbin row and column carry the slack
    CHECK(s.entries.row(m).sum() == doctest::Approx(static_cast<double>(n)).epsilon(1e-6));

    double shift = 5.0 * u(rng);
    auto shifted = sinkhorn((c.array() + shift).matrix(), alpha + shift, 100);
    CHECK((shifted.entries - s.entries).cwiseAbs().maxCoeff() < 1e-9);
  }
  CHECK_THROWS_AS(sinkhorn(Eigen::MatrixXd::Zero(2, 2), 0.0, 0), ConfigError);
  // large costs do not overflow
  CHECK(sinkhorn(Eigen::MatrixXd::Constant(3, 3, 800.0), 0.0, 10).entries.allFinite());
}

TEST_CASE("mutual top-k") {
  AssignmentMatrix diag;
  diag.entries = Eigen::MatrixXd::Constant(5, 5, 0.01);
  for (int i = 0; i < 4; ++i) diag.entries(i, i) = 0.9;
  auto d = mutual_top_k(diag, 1);
  REQUIRE(d.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK((d[i].source == i && d[i].target == i));

  AssignmentMatrix any;
  any.entries = Eigen::MatrixXd::Random(4, 6);
  CHECK(mutual_top_k(any, 5).size() == 15);  // k >= max(m, n) keeps all 3 x 5 inner pairs

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 40), n = 1 + static_cast<Eigen::Index>(rng() % 40);
    AssignmentMatrix s;
    s.entries = Eigen::MatrixXd::NullaryExpr(m + 1, n + 1, [&] {
      return trial % 2 ? u(rng) : std::round(u(rng) * 5) / 5;  // coarse values force ties
    });
    std::size_t k = 1 + rng() % 4;
    auto got = mutual_top_k(s, k);
    CHECK(got == oracle::mutual_rank_scan(s.inner(), k));

    // transposing the matrix transposes the selection
    AssignmentMatrix t;
    t.entries = s.entries.transpose();
    auto tr = mutual_top_k(t, k);
    REQUIRE(tr.size() == got.size());
    std::size_t hits = 0;
    for (const auto& p : got)
      for (const auto& q : tr) hits += p.source == q.target && p.target == q.source;
    CHECK(hits == got.size());
    if (trial % 2) CHECK(got.size() <= k * static_cast<std::size_t>(std::min(m, n)));
  }
}
