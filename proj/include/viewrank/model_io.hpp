#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "viewrank/segmentation.hpp"

namespace viewrank {

// Options for training one model from a raw feature matrix. This is the
// surface the CLI `train` command and the evaluation harness share.
struct TrainOptions {
  ModelKind kind = ModelKind::ridge;
  bool multi = false;
  int k_clusters = 3;
  double alpha = 1.0;
  ForestConfig forest;
  bool transform_scales = true;     // log_scale on likes_avg / followers columns
  bool log_target = false;          // train on log_scale(influence)
  int rfe_target = 0;               // 0 = keep all features
  std::vector<int> active_features; // explicit subset; empty = all (or RFE)
  std::uint64_t seed = 42;
  int threads = 1;
};

// A trained predictor of any configured kind. Predicts from RAW feature
// matrices (n x 8); scale transform and column selection are internal.
struct TrainedModel {
  TrainOptions options;
  std::variant<LinearModel, ForestModel, MultiRegressionModel> impl;

  Eigen::VectorXd predict(const Eigen::MatrixXd& X_raw) const;
};

TrainedModel train_model(const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y,
                         const TrainOptions& options);

// JSON persistence. save -> load -> predict is bit-exact.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& doc);

}  // namespace viewrank
