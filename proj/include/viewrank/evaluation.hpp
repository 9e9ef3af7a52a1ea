#pragma once

#include <functional>
#include <map>
#include <string>

#include "viewrank/model_io.hpp"

namespace viewrank {

// 1 - SS_res / SS_tot, SS_tot about the mean of y_true.
double r_squared(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred);

// Pearson correlation of average ranks (ties get the mean of the rank
// positions they occupy).
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

struct FoldSplit {
  std::vector<int> fold_assignments;  // values in 0..k-1
  int k = 0;
  std::uint64_t seed = 0;
};

// Seeded shuffle of 0..n-1 dealt round-robin into k folds.
FoldSplit kfold_split(int n, int k = 5, std::uint64_t seed = 0);

struct MetricPair {
  double r2 = 0.0;
  double rs = 0.0;
};

// Hook receiving each fold's fitted model (used by the leakage canary).
using FoldModelHook = std::function<void(int fold, const TrainedModel&)>;

// Cross-validated evaluation of one configuration. Per fold: fit on the
// training users only (standardizer, RFE and k-means included), predict the
// held-out fold, score, then average the per-fold metrics.
MetricPair evaluate_config(const Dataset& dataset, const TrainOptions& config,
                           const FoldSplit& folds, const FoldModelHook& hook = nullptr);

struct EvalRow {
  std::string model_name;
  double r2_regression = 0.0;
  double rs_regression = 0.0;
  double r2_multi = 0.0;
  double rs_multi = 0.0;
};

struct EvalReport {
  std::vector<EvalRow> rows;
  std::uint64_t seed = 0;
  int n_users = 0;
  int k_folds = 0;
};

// Six configurations x {plain, multi}: full ridge, full forest, minimal
// (RFE-4) ridge, minimal forest, followers baseline, likes baseline.
EvalReport run_benchmark(const Dataset& dataset, std::uint64_t seed, int threads = 1);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_text(const EvalReport& report);

struct EngagementEdge {
  std::string source;  // commenter
  std::string target;  // author
  long long weight = 1;
};

// Weighted PageRank by power iteration; dangling mass redistributed
// uniformly; scores sum to 1.
std::map<std::string, double> pagerank(const std::vector<EngagementEdge>& edges,
                                       double damping = 0.85, double tol = 1e-10,
                                       int max_iter = 200);

// Spearman of score vs influence over the common users.
double pagerank_rank_correlation(const std::map<std::string, double>& scores,
                                 const std::map<std::string, double>& influences);

}  // namespace viewrank
