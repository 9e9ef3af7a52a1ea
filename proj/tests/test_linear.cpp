#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "viewrank/error.hpp"
#include "viewrank/models.hpp"
#include "viewrank/rng.hpp"

using namespace viewrank;

TEST_CASE("ols interpolates two points exactly") {
  Eigen::MatrixXd X(2, 1);
  X << 1, 2;
  Eigen::VectorXd y(2);
  y << 3, 5;
  const auto m = fit_linear(X, y, 0.0, true);
  CHECK(m.weights(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ridge without intercept matches the closed form") {
  // X = [1,2,3], y = [2,4,6], alpha = 1: w = X'y / (X'X + 1) = 28/15
  Eigen::MatrixXd X(3, 1);
  X << 1, 2, 3;
  Eigen::VectorXd y(3);
  y << 2, 4, 6;
  const auto m = fit_linear(X, y, 1.0, false);
  CHECK(m.weights(0) == doctest::Approx(28.0 / 15.0).epsilon(1e-12));
  CHECK(m.intercept == doctest::Approx(0.0));
}

TEST_CASE("constant target yields zero weights and the constant intercept") {
  Eigen::MatrixXd X(5, 2);
  X << 1, 4, 2, 1, 3, 7, 4, 2, 5, 9;
  Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 3.5);
  const auto m = fit_linear(X, y, 0.5, true);
  CHECK(m.weights.cwiseAbs().maxCoeff() < 1e-10);
  CHECK(m.intercept == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("duplicate columns with alpha 0 raise SingularSystem") {
  Eigen::MatrixXd X(4, 2);
  X << 1, 1, 2, 2, 3, 3, 4, 4;
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 4;
  try {
    fit_linear(X, y, 0.0, true);
    FAIL("expected SingularSystem");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::singular_system);
  }
  // any positive alpha regularizes the same system
  CHECK_NOTHROW(fit_linear(X, y, 1e-6, true));
}

TEST_CASE("fit_linear matches normal-equations oracle on random problems") {
  Rng rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + static_cast<int>(rng.next_below(3));
    const int n = d + 3 + static_cast<int>(rng.next_below(20));
    const double alpha = (trial % 3 == 0) ? 0.0 : rng.uniform(0.01, 10.0);
    const bool fit_intercept = trial % 2 == 0;

    Eigen::MatrixXd X(n, d);
    Eigen::VectorXd y(n);
    std::vector<std::vector<double>> Xo(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(d)));
    std::vector<double> yo(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < d; ++j) {
        X(i, j) = rng.uniform(-5.0, 5.0);
        Xo[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = X(i, j);
      }
      y(i) = rng.uniform(-10.0, 10.0);
      yo[static_cast<std::size_t>(i)] = y(i);
    }

    const auto m = fit_linear(X, y, alpha, fit_intercept);
    const auto ref = oracles::ridge_normal_equations(Xo, yo, alpha, fit_intercept);
    CHECK(m.intercept == doctest::Approx(ref[0]).epsilon(1e-8));
    for (int j = 0; j < d; ++j) {
      CHECK(m.weights(j) == doctest::Approx(ref[static_cast<std::size_t>(j) + 1]).epsilon(1e-8));
    }
  }
}

TEST_CASE("larger alpha shrinks the weight norm") {
  Rng rng(55);
  Eigen::MatrixXd X(30, 3);
  Eigen::VectorXd y(30);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 3; ++j) X(i, j) = rng.uniform(-2.0, 2.0);
    y(i) = 3.0 * X(i, 0) - X(i, 1) + rng.normal() * 0.1;
  }
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha : {0.0, 0.1, 1.0, 10.0, 100.0}) {
    const auto m = fit_linear(X, y, alpha, true);
    const double norm = m.weights.norm();
    CHECK(norm <= prev + 1e-10);
    prev = norm;
  }
}

TEST_CASE("train_ridge standardizes when regularized and predicts full-width rows") {
  Rng rng(91);
  Eigen::MatrixXd X(50, kNumFeatures);
  Eigen::VectorXd y(50);
  for (int i = 0; i < 50; ++i) {
    for (int j = 0; j < kNumFeatures; ++j) X(i, j) = rng.uniform(0.0, 100.0);
    y(i) = 2.0 * X(i, 1) + 0.5 * X(i, 4) + rng.normal();
  }
  const std::vector<int> active{1, 4};
  const auto m = train_ridge(X, y, 1.0, active);
  CHECK(m.standardizer.has_value());
  CHECK(m.active_features == active);
  const Eigen::VectorXd pred = predict_linear(m, X);
  CHECK((pred - y).cwiseAbs().mean() < 2.0);

  // unregularized fits skip standardization
  const auto raw = train_ridge(X, y, 0.0, active);
  CHECK_FALSE(raw.standardizer.has_value());
}

TEST_CASE("linear feature importance is the absolute weight") {
  LinearModel m;
  m.weights = Eigen::Vector3d(-2.0, 0.5, 1.5);
  m.active_features = {0, 1, 2};
  const auto imp = feature_importance(m);
  REQUIRE(imp.size() == 3);
  CHECK(imp[0] == doctest::Approx(2.0));
  CHECK(imp[1] == doctest::Approx(0.5));
  CHECK(imp[2] == doctest::Approx(1.5));
}

TEST_CASE("rfe keeps the dominant feature and returns ascending indices") {
  Rng rng(77);
  const int n = 120;
  Eigen::MatrixXd X(n, kNumFeatures);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < kNumFeatures; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
    y(i) = 10.0 * X(i, 5) + 0.01 * rng.normal();
  }
  ModelHyper hyper;
  hyper.alpha = 1.0;

  const auto one = rfe(X, y, ModelKind::ridge, hyper, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0] == 5);

  const auto all = rfe(X, y, ModelKind::ridge, hyper, kNumFeatures);
  REQUIRE(all.size() == static_cast<std::size_t>(kNumFeatures));
  for (int j = 0; j < kNumFeatures; ++j) CHECK(all[static_cast<std::size_t>(j)] == j);

  const auto four = rfe(X, y, ModelKind::ridge, hyper, 4);
  REQUIRE(four.size() == 4);
  CHECK(std::is_sorted(four.begin(), four.end()));
  CHECK(std::find(four.begin(), four.end(), 5) != four.end());

  hyper.forest.n_trees = 20;
  hyper.forest.seed = 9;
  const auto forest_one = rfe(X, y, ModelKind::forest, hyper, 1);
  REQUIRE(forest_one.size() == 1);
  CHECK(forest_one[0] == 5);
}

TEST_CASE("fit_linear input validation") {
  Eigen::MatrixXd X(2, 1);
  X << 1, 2;
  Eigen::VectorXd y(3);
  y << 1, 2, 3;
  CHECK_THROWS_AS(fit_linear(X, y, 0.0, true), Error);
  Eigen::VectorXd short_y(1);
  short_y << 1;
  Eigen::MatrixXd one_row(1, 1);
  one_row << 1;
  CHECK_THROWS_AS(fit_linear(one_row, short_y, 0.0, true), Error);
}
