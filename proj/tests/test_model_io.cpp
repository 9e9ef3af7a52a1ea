#include <doctest.h>

#include <cmath>

#include "viewrank/error.hpp"
#include "viewrank/model_io.hpp"
#include "viewrank/rng.hpp"

using namespace viewrank;

namespace {

// Raw feature matrix with positive scale columns and a follower gradient wide
// enough for clustering.
Eigen::MatrixXd raw_matrix(int n, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd X(n, kNumFeatures);
  for (int i = 0; i < n; ++i) {
    X(i, kLikesAvgFeature) = rng.uniform(5.0, 500.0);
    X(i, 1) = rng.uniform(1.0, 50.0);
    X(i, kFollowersFeature) = std::exp(rng.uniform(std::log(100.0), std::log(200000.0)));
    X(i, 3) = std::sqrt(X(i, kLikesAvgFeature) * X(i, kFollowersFeature));
    X(i, 4) = X(i, kFollowersFeature) / 20.0;
    X(i, 5) = rng.uniform(0.05, 0.3);
    X(i, 6) = rng.uniform(0.0, 100.0);
    X(i, 7) = rng.uniform(1.0, 5.0);
  }
  return X;
}

Eigen::VectorXd target_for(const Eigen::MatrixXd& X, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::VectorXd y(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    y(i) = 12.0 * X(i, kLikesAvgFeature) + 0.001 * X(i, kFollowersFeature) +
           5.0 * rng.normal() + 50.0;
  }
  return y;
}

void check_roundtrip(const TrainedModel& model, const Eigen::MatrixXd& X) {
  const nlohmann::json doc = model_to_json(model);
  const TrainedModel loaded = model_from_json(doc);
  const Eigen::VectorXd a = model.predict(X);
  const Eigen::VectorXd b = loaded.predict(X);
  for (Eigen::Index i = 0; i < a.size(); ++i) CHECK(a(i) == b(i));  // bit-exact
  CHECK(model_to_json(loaded).dump() == doc.dump());
}

}  // namespace

TEST_CASE("ridge model round trips through json") {
  const Eigen::MatrixXd X = raw_matrix(80, 1);
  const Eigen::VectorXd y = target_for(X, 2);
  TrainOptions options;
  options.kind = ModelKind::ridge;
  options.alpha = 1.0;
  const TrainedModel model = train_model(X, y, options);
  CHECK(std::holds_alternative<LinearModel>(model.impl));
  CHECK(model.options.active_features.size() == static_cast<std::size_t>(kNumFeatures));
  check_roundtrip(model, X);
}

TEST_CASE("forest model round trips through json") {
  const Eigen::MatrixXd X = raw_matrix(60, 3);
  const Eigen::VectorXd y = target_for(X, 4);
  TrainOptions options;
  options.kind = ModelKind::forest;
  options.forest.n_trees = 10;
  options.seed = 7;
  const TrainedModel model = train_model(X, y, options);
  CHECK(std::holds_alternative<ForestModel>(model.impl));
  check_roundtrip(model, X);
}

TEST_CASE("multi model round trips through json") {
  const Eigen::MatrixXd X = raw_matrix(150, 5);
  const Eigen::VectorXd y = target_for(X, 6);
  TrainOptions options;
  options.kind = ModelKind::ridge;
  options.multi = true;
  options.k_clusters = 2;
  const TrainedModel model = train_model(X, y, options);
  CHECK(std::holds_alternative<MultiRegressionModel>(model.impl));
  check_roundtrip(model, X);
}

TEST_CASE("rfe training restricts the active set and survives persistence") {
  const Eigen::MatrixXd X = raw_matrix(100, 9);
  const Eigen::VectorXd y = target_for(X, 10);
  TrainOptions options;
  options.kind = ModelKind::ridge;
  options.rfe_target = 4;
  const TrainedModel model = train_model(X, y, options);
  const auto& lin = std::get<LinearModel>(model.impl);
  CHECK(lin.active_features.size() == 4);
  CHECK(std::is_sorted(lin.active_features.begin(), lin.active_features.end()));
  CHECK(model.options.active_features == lin.active_features);
  check_roundtrip(model, X);
}

TEST_CASE("explicit active features bypass rfe") {
  const Eigen::MatrixXd X = raw_matrix(60, 11);
  const Eigen::VectorXd y = target_for(X, 12);
  TrainOptions options;
  options.kind = ModelKind::ridge;
  options.rfe_target = 2;
  options.active_features = {kFollowersFeature};
  const TrainedModel model = train_model(X, y, options);
  CHECK(std::get<LinearModel>(model.impl).active_features ==
        std::vector<int>{kFollowersFeature});
}

TEST_CASE("log_target trains on the scaled target") {
  const Eigen::MatrixXd X = raw_matrix(60, 13);
  Eigen::VectorXd y = target_for(X, 14).cwiseAbs();
  TrainOptions options;
  options.kind = ModelKind::ridge;
  options.alpha = 0.0;
  options.transform_scales = false;
  options.active_features = {kLikesAvgFeature};
  options.log_target = true;
  const TrainedModel model = train_model(X, y, options);

  // refit by hand on log_scale(y): the fitted line must match
  Eigen::VectorXd ly(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) ly(i) = log_scale(y(i));
  const auto manual = train_ridge(X, ly, 0.0, {kLikesAvgFeature});
  const auto& lin = std::get<LinearModel>(model.impl);
  CHECK(lin.weights(0) == doctest::Approx(manual.weights(0)).epsilon(1e-12));
  CHECK(lin.intercept == doctest::Approx(manual.intercept).epsilon(1e-12));
  check_roundtrip(model, X);
}

TEST_CASE("training is deterministic in the seed") {
  const Eigen::MatrixXd X = raw_matrix(70, 15);
  const Eigen::VectorXd y = target_for(X, 16);
  TrainOptions options;
  options.kind = ModelKind::forest;
  options.forest.n_trees = 8;
  options.seed = 99;
  const auto a = model_to_json(train_model(X, y, options)).dump();
  const auto b = model_to_json(train_model(X, y, options)).dump();
  CHECK(a == b);
  options.seed = 100;
  const auto c = model_to_json(train_model(X, y, options)).dump();
  CHECK(a != c);
}

TEST_CASE("multi with one cluster predicts like the plain model") {
  const Eigen::MatrixXd X = raw_matrix(80, 17);
  const Eigen::VectorXd y = target_for(X, 18);
  TrainOptions plain;
  plain.kind = ModelKind::forest;
  plain.forest.n_trees = 6;
  plain.seed = 21;
  TrainOptions multi = plain;
  multi.multi = true;
  multi.k_clusters = 1;
  const Eigen::VectorXd a = train_model(X, y, plain).predict(X);
  const Eigen::VectorXd b = train_model(X, y, multi).predict(X);
  CHECK((a - b).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("model_from_json rejects foreign documents") {
  CHECK_THROWS_AS(model_from_json(nlohmann::json{{"hello", 1}}), Error);
  CHECK_THROWS_AS(model_from_json(nlohmann::json::array()), Error);
  nlohmann::json doc{{"format", "viewrank-model"}};
  CHECK_THROWS_AS(model_from_json(doc), std::exception);
}
