#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "viewrank/error.hpp"
#include "viewrank/rng.hpp"
#include "viewrank/segmentation.hpp"

using namespace viewrank;

TEST_CASE("two well-separated pairs split cleanly") {
  const std::vector<double> values{1.0, 2.0, 10.0, 11.0};
  const auto km = fit_kmeans_1d(values, 2, 10, 7);
  REQUIRE(km.centroids.size() == 2);
  CHECK(km.centroids[0] == doctest::Approx(1.5));
  CHECK(km.centroids[1] == doctest::Approx(10.5));
  CHECK(km.inertia == doctest::Approx(1.0));
  CHECK(assign_cluster(1.9, km.centroids) == 0);
  CHECK(assign_cluster(9.0, km.centroids) == 1);
}

TEST_CASE("k = 1 centroid is the mean") {
  const std::vector<double> values{2.0, 4.0, 9.0};
  const auto km = fit_kmeans_1d(values, 1, 10, 0);
  REQUIRE(km.centroids.size() == 1);
  CHECK(km.centroids[0] == doctest::Approx(5.0));
  CHECK(km.inertia == doctest::Approx((3 * 3) + (1 * 1) + (4 * 4)).epsilon(1e-12));
}

TEST_CASE("k equal to the number of distinct values gives zero inertia") {
  const std::vector<double> values{3.0, 3.0, 8.0, 1.0, 8.0};
  const auto km = fit_kmeans_1d(values, 3, 10, 4);
  REQUIRE(km.centroids.size() == 3);
  CHECK(km.inertia == doctest::Approx(0.0));
  CHECK(km.centroids[0] == doctest::Approx(1.0));
  CHECK(km.centroids[1] == doctest::Approx(3.0));
  CHECK(km.centroids[2] == doctest::Approx(8.0));
}

TEST_CASE("equidistant points break ties to the lower cluster") {
  const std::vector<double> centroids{1.0, 3.0};
  CHECK(assign_cluster(2.0, centroids) == 0);
  CHECK(assign_cluster(2.0001, centroids) == 1);
}

TEST_CASE("too few distinct values is an error") {
  try {
    fit_kmeans_1d({5.0, 5.0, 5.0, 5.0}, 2, 10, 1);
    FAIL("expected TooFewDistinctValues");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::too_few_distinct_values);
  }
  CHECK_THROWS_AS(fit_kmeans_1d({1.0, 2.0}, 3, 10, 1), Error);
  CHECK_THROWS_AS(fit_kmeans_1d({1.0, 2.0}, 0, 10, 1), Error);
}

TEST_CASE("restarted k-means matches the exact dynamic program on small inputs") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4 + static_cast<int>(rng.next_below(9));  // up to 12 points
    const int k = 1 + static_cast<int>(rng.next_below(3));
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(rng.uniform(0.0, 100.0));
    std::sort(values.begin(), values.end());
    if (std::unique(values.begin(), values.end()) - values.begin() < k) continue;

    const auto km = fit_kmeans_1d(values, k, 10, trial);
    const double exact = oracles::kmeans_1d_exact_inertia(values, k);
    CHECK(km.inertia == doctest::Approx(exact).epsilon(1e-9));
    CHECK(std::is_sorted(km.centroids.begin(), km.centroids.end()));
    for (std::size_t i = 1; i < km.centroids.size(); ++i) {
      CHECK(km.centroids[i] > km.centroids[i - 1]);
    }
  }
}

TEST_CASE("fit_kmeans_1d is deterministic for a fixed seed") {
  Rng rng(19);
  std::vector<double> values;
  for (int i = 0; i < 300; ++i) values.push_back(rng.uniform(0.0, 1000.0));
  const auto a = fit_kmeans_1d(values, 3, 10, 42);
  const auto b = fit_kmeans_1d(values, 3, 10, 42);
  REQUIRE(a.centroids.size() == b.centroids.size());
  for (std::size_t i = 0; i < a.centroids.size(); ++i) {
    CHECK(a.centroids[i] == b.centroids[i]);
  }
  CHECK(a.inertia == b.inertia);
}

namespace {

struct Problem {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<double> followers;
};

// Two populations: low-follower users with y = 2 * likes_avg, high-follower
// users with y = 10 * likes_avg.
Problem two_populations(int per_group, std::uint64_t seed) {
  Problem p;
  const int n = 2 * per_group;
  p.X = Eigen::MatrixXd::Zero(n, kNumFeatures);
  p.y.resize(n);
  p.followers.resize(static_cast<std::size_t>(n));
  Rng rng(seed);
  for (int i = 0; i < n; ++i) {
    const bool high = i >= per_group;
    const double followers = high ? rng.uniform(90000.0, 110000.0) : rng.uniform(80.0, 120.0);
    const double likes = rng.uniform(10.0, 100.0);
    p.X(i, kLikesAvgFeature) = likes;
    p.X(i, kFollowersFeature) = followers;
    for (int j = 0; j < kNumFeatures; ++j) {
      if (j != kLikesAvgFeature && j != kFollowersFeature) p.X(i, j) = rng.uniform(0.0, 1.0);
    }
    p.y(i) = (high ? 10.0 : 2.0) * likes;
    p.followers[static_cast<std::size_t>(i)] = followers;
  }
  return p;
}

}  // namespace

TEST_CASE("fit_multi with k = 1 equals the plain base model") {
  const auto p = two_populations(40, 3);
  BaseModelSpec base;
  base.kind = ModelKind::ridge;
  base.hyper.alpha = 1.0;
  base.active_features = {kLikesAvgFeature, kFollowersFeature, 3, 4};

  const auto multi = fit_multi(p.X, p.y, p.followers, 1, base, 11);
  const auto plain = train_ridge(p.X, p.y, base.hyper.alpha, base.active_features);
  const Eigen::VectorXd pm = predict_multi(multi, p.X, p.followers);
  const Eigen::VectorXd pp = predict_linear(plain, p.X);
  CHECK((pm - pp).cwiseAbs().maxCoeff() < 1e-12);

  base.kind = ModelKind::forest;
  base.hyper.forest.n_trees = 10;
  base.hyper.forest.seed = 11;
  const auto multi_f = fit_multi(p.X, p.y, p.followers, 1, base, 11);
  const auto plain_f = fit_forest(p.X, p.y, base.hyper.forest, base.active_features);
  const Eigen::VectorXd fm = predict_multi(multi_f, p.X, p.followers);
  const Eigen::VectorXd fp = predict_forest(plain_f, p.X);
  CHECK((fm - fp).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("fit_multi recovers distinct per-cluster slopes") {
  const auto p = two_populations(60, 21);
  BaseModelSpec base;
  base.kind = ModelKind::ridge;
  base.hyper.alpha = 0.0;
  base.active_features = {kLikesAvgFeature};

  const auto multi = fit_multi(p.X, p.y, p.followers, 2, base, 5);
  REQUIRE(multi.cluster_models.size() == 2);

  // cluster on the transformed scale, as the routing does
  std::vector<double> slopes;
  for (const auto& cm : multi.cluster_models) {
    const auto& lin = std::get<LinearModel>(cm);
    slopes.push_back(lin.weights(0));
  }
  std::sort(slopes.begin(), slopes.end());
  CHECK(slopes[0] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(slopes[1] == doctest::Approx(10.0).epsilon(0.05));

  // every row routes to the model for its own population
  const Eigen::VectorXd pred = predict_multi(multi, p.X, p.followers);
  for (int i = 0; i < p.y.size(); ++i) {
    CHECK(pred(i) == doctest::Approx(p.y(i)).epsilon(0.05));
  }

  // a single pooled slope cannot fit both groups this tightly
  const auto pooled = train_ridge(p.X, p.y, 0.0, base.active_features);
  const Eigen::VectorXd pooled_pred = predict_linear(pooled, p.X);
  CHECK((pooled_pred - p.y).cwiseAbs().maxCoeff() > 10.0);
}

TEST_CASE("fit_multi rejects clusters too small to support the base model") {
  // one lone high-follower user: its cluster has a single row
  auto p = two_populations(20, 9);
  std::vector<double> followers = p.followers;
  for (std::size_t i = 21; i < followers.size(); ++i) followers[i] = 100.0;
  followers[20] = 100000.0;

  BaseModelSpec base;
  base.kind = ModelKind::ridge;
  base.hyper.alpha = 1.0;
  base.active_features = {kLikesAvgFeature, kFollowersFeature};
  try {
    fit_multi(p.X, p.y, followers, 2, base, 3);
    FAIL("expected ClusterTooSmall");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::cluster_too_small);
  }
}
