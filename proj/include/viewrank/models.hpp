#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "viewrank/features.hpp"

namespace viewrank {

enum class ModelKind { ridge, forest };

struct LinearModel {
  Eigen::VectorXd weights;  // one per active feature
  double intercept = 0.0;
  double alpha = 0.0;
  std::vector<int> active_features;           // ascending column indices
  std::optional<Standardizer> standardizer;   // present when fit on standardized inputs
};

struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf prediction

  bool is_leaf() const { return left < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict_row(const Eigen::RowVectorXd& row) const;
};

struct ForestConfig {
  int n_trees = 100;
  int min_samples_leaf = 5;
  int max_features_per_split = 0;  // 0 means ceil(d / 3)
  bool bootstrap = true;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<RegressionTree> trees;
  ForestConfig config;
  std::vector<int> active_features;
  std::vector<double> split_gain;  // variance reduction per active feature, unnormalized
};

// Ridge / ordinary least squares, closed form. X is taken as given (callers
// standardize before fitting when alpha > 0); the intercept is never
// penalized (y and X are centered, the normal equations solved, then the
// intercept recovered).
LinearModel fit_linear(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double alpha,
                       bool fit_intercept);

// Full pipeline for a feature-space matrix: select active columns,
// standardize when alpha > 0, fit. The returned model predicts from
// full-width matrices.
LinearModel train_ridge(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y, double alpha,
                        const std::vector<int>& active_features, bool fit_intercept = true);

Eigen::VectorXd predict_linear(const LinearModel& model, const Eigen::MatrixXd& X_full);

// CART regression forest: bootstrap per tree, greedy variance-minimizing
// splits over a per-node random feature subset, leaves predict the mean of
// their targets. Deterministic given (X, y, config).
ForestModel fit_forest(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y,
                       const ForestConfig& config, const std::vector<int>& active_features,
                       int threads = 1);

Eigen::VectorXd predict_forest(const ForestModel& model, const Eigen::MatrixXd& X_full);

// Linear: |w_i| in the space the model was fit in. Forest: per-feature total
// variance reduction over all trees, normalized to sum 1 (all zeros when no
// splits exist). Indexed like active_features.
std::vector<double> feature_importance(const LinearModel& model);
std::vector<double> feature_importance(const ForestModel& model);

struct ModelHyper {
  double alpha = 1.0;
  ForestConfig forest;
};

// Recursive feature elimination: refit on the active set, drop the single
// lowest-importance feature (ties to the lowest index) until target_count
// remain. Ridge refits its standardizer each round. Returns ascending indices.
std::vector<int> rfe(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y, ModelKind kind,
                     const ModelHyper& hyper, int target_count, int threads = 1);

}  // namespace viewrank
