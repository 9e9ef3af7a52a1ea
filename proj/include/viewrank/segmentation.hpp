#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "viewrank/models.hpp"

namespace viewrank {

struct KMeans1D {
  std::vector<double> centroids;  // strictly ascending
  double inertia = 0.0;
  int k = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
};

// Lloyd's iteration with k-means++ initialization, best of `restarts`
// independent runs. 1-D values only.
KMeans1D fit_kmeans_1d(const std::vector<double>& values, int k, int restarts = 10,
                       std::uint64_t seed = 0);

// Nearest centroid, ties to the lower index.
int assign_cluster(double value, const std::vector<double>& centroids);

struct BaseModelSpec {
  ModelKind kind = ModelKind::ridge;
  ModelHyper hyper;
  std::vector<int> active_features;
};

using ClusterModel = std::variant<LinearModel, ForestModel>;

// K-Means on log_scale(followers), one base model per cluster.
struct MultiRegressionModel {
  KMeans1D kmeans;
  std::vector<ClusterModel> cluster_models;
  int followers_feature_index = kFollowersFeature;
};

MultiRegressionModel fit_multi(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y,
                               const std::vector<double>& followers_raw, int k,
                               const BaseModelSpec& base, std::uint64_t seed, int threads = 1);

Eigen::VectorXd predict_multi(const MultiRegressionModel& model, const Eigen::MatrixXd& X_full,
                              const std::vector<double>& followers_raw);

}  // namespace viewrank
