#include <algorithm>
#include <cmath>

#include "viewrank/error.hpp"
#include "viewrank/models.hpp"

namespace viewrank {

namespace {

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<int>& cols) {
  Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= X.cols()) {
      throw Error(Errc::dimension_mismatch, "feature index out of range");
    }
    out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
  }
  return out;
}

}  // namespace

LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                       bool fit_intercept) {
  if (X.rows() != y.size()) throw Error(Errc::length_mismatch, "X rows != y length");
  if (alpha < 0.0) throw Error(Errc::invalid_config, "alpha must be non-negative");
  const Eigen::Index d = X.cols();

  Eigen::MatrixXd Xc = X;
  Eigen::VectorXd yc = y;
  Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(d);
  double y_mean = 0.0;
  if (fit_intercept) {
    x_mean = X.colwise().mean();
    y_mean = y.mean();
    Xc.rowwise() -= x_mean;
    yc.array() -= y_mean;
  }

  Eigen::MatrixXd gram = Xc.transpose() * Xc;
  gram.diagonal().array() += alpha;
  const Eigen::VectorXd rhs = Xc.transpose() * yc;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
  if (alpha == 0.0) {
    const double max_pivot = std::abs(lu.matrixLU()(0, 0));
    lu.setThreshold(max_pivot > 0.0 ? 1e-12 / max_pivot : 1.0);
    if (!lu.isInvertible()) {
      throw Error(Errc::singular_system, "X'X is numerically singular with alpha = 0");
    }
  }

  LinearModel model;
  model.weights = lu.solve(rhs);
  model.alpha = alpha;
  model.intercept = fit_intercept ? y_mean - x_mean.dot(model.weights) : 0.0;
  return model;
}

LinearModel train_ridge(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y, double alpha,
                        const std::vector<int>& active_features, bool fit_intercept) {
  Eigen::MatrixXd X = select_columns(X_full, active_features);
  std::optional<Standardizer> standardizer;
  if (alpha > 0.0) {
    standardizer = fit_standardizer(X);
    X = apply_standardizer(*standardizer, X);
  }
  LinearModel model = fit_linear(X, y, alpha, fit_intercept);
  model.active_features = active_features;
  model.standardizer = std::move(standardizer);
  return model;
}

Eigen::VectorXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& X_full) {
  Eigen::MatrixXd X = model.active_features.empty()
                          ? X_full
                          : select_columns(X_full, model.active_features);
  if (X.cols() != model.weights.size()) {
    throw Error(Errc::dimension_mismatch, "prediction column count mismatch");
  }
  if (model.standardizer) X = apply_standardizer(*model.standardizer, X);
  return (X * model.weights).array() + model.intercept;
}

std::vector<double> feature_importance(const LinearModel& model) {
  if (model.weights.size() == 0) throw Error(Errc::unfitted_model, "linear model has no weights");
  std::vector<double> importance(static_cast<std::size_t>(model.weights.size()));
  for (Eigen::Index i = 0; i < model.weights.size(); ++i) {
    importance[static_cast<std::size_t>(i)] = std::abs(model.weights(i));
  }
  return importance;
}

std::vector<int> rfe(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y, ModelKind kind,
                     const ModelHyper& hyper, int target_count, int threads) {
  const int d = static_cast<int>(X_full.cols());
  if (target_count < 1 || target_count > d) {
    throw Error(Errc::invalid_config, "target_count out of range");
  }
  std::vector<int> active(d);
  for (int i = 0; i < d; ++i) active[i] = i;

  while (static_cast<int>(active.size()) > target_count) {
    std::vector<double> importance;
    if (kind == ModelKind::ridge) {
      importance = feature_importance(train_ridge(X_full, y, hyper.alpha, active));
    } else {
      importance = feature_importance(fit_forest(X_full, y, hyper.forest, active, threads));
    }
    // lowest importance loses; ties broken by lowest feature index
    std::size_t worst = 0;
    for (std::size_t i = 1; i < importance.size(); ++i) {
      if (importance[i] < importance[worst]) worst = i;
    }
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  return active;
}

}  // namespace viewrank
