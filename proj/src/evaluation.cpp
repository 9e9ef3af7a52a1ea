#include "viewrank/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "viewrank/error.hpp"
#include "viewrank/rng.hpp"

namespace viewrank {

double r_squared(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error(Errc::length_mismatch, "R^2 length mismatch");
  if (y_true.size() < 2) throw Error(Errc::too_few_rows, "R^2 needs at least 2 points");
  const double mean = y_true.mean();
  const double ss_tot = (y_true.array() - mean).square().sum();
  if (ss_tot == 0.0) throw Error(Errc::constant_target, "R^2 undefined for a constant target");
  const double ss_res = (y_true - y_pred).array().square().sum();
  return 1.0 - ss_res / ss_tot;
}

namespace {

// Average ranks, 1-based; ties get the mean of the positions they occupy.
std::vector<double> average_ranks(const Eigen::VectorXd& v) {
  const std::size_t n = static_cast<std::size_t>(v.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v(static_cast<Eigen::Index>(a)) <
                                                        v(static_cast<Eigen::Index>(b)); });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v(static_cast<Eigen::Index>(order[j + 1])) ==
                            v(static_cast<Eigen::Index>(order[i]))) {
      ++j;
    }
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = a.size();
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw Error(Errc::degenerate_ranking, "rank vector has no variance");
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw Error(Errc::length_mismatch, "spearman length mismatch");
  if (a.size() < 2) throw Error(Errc::too_few_rows, "spearman needs at least 2 points");
  return pearson(average_ranks(a), average_ranks(b));
}

FoldSplit kfold_split(int n, int k, std::uint64_t seed) {
  if (k < 2 || n < k) throw Error(Errc::too_few_users, "need n >= k >= 2");
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, 0xf01d));
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i + 1)));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  FoldSplit split;
  split.k = k;
  split.seed = seed;
  split.fold_assignments.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    split.fold_assignments[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i % k;
  }
  return split;
}

MetricPair evaluate_config(const Dataset& dataset, const TrainOptions& config,
                           const FoldSplit& folds, const FoldModelHook& hook) {
  const int n = static_cast<int>(dataset.users.size());
  if (static_cast<int>(folds.fold_assignments.size()) != n) {
    throw Error(Errc::length_mismatch, "fold assignments do not match dataset size");
  }
  const Eigen::MatrixXd X_raw = feature_matrix(dataset);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) y(i) = dataset.users[static_cast<std::size_t>(i)].influence;

  double r2_sum = 0.0, rs_sum = 0.0;
  for (int f = 0; f < folds.k; ++f) {
    std::vector<int> train_rows, test_rows;
    for (int i = 0; i < n; ++i) {
      (folds.fold_assignments[static_cast<std::size_t>(i)] == f ? test_rows : train_rows)
          .push_back(i);
    }
    if (test_rows.size() < 3) {
      throw Error(Errc::invalid_fold,
                  "fold " + std::to_string(f) + " has " + std::to_string(test_rows.size()) +
                      " test users");
    }

    // Fitting sees training rows only.
    Eigen::MatrixXd X_train(static_cast<Eigen::Index>(train_rows.size()), X_raw.cols());
    Eigen::VectorXd y_train(static_cast<Eigen::Index>(train_rows.size()));
    for (std::size_t i = 0; i < train_rows.size(); ++i) {
      X_train.row(static_cast<Eigen::Index>(i)) = X_raw.row(train_rows[i]);
      y_train(static_cast<Eigen::Index>(i)) = y(train_rows[i]);
    }

    TrainOptions fold_config = config;
    fold_config.seed = derive_seed(config.seed, static_cast<std::uint64_t>(f));
    const TrainedModel model = train_model(X_train, y_train, fold_config);
    if (hook) hook(f, model);

    Eigen::MatrixXd X_test(static_cast<Eigen::Index>(test_rows.size()), X_raw.cols());
    Eigen::VectorXd y_test(static_cast<Eigen::Index>(test_rows.size()));
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
      X_test.row(static_cast<Eigen::Index>(i)) = X_raw.row(test_rows[i]);
      y_test(static_cast<Eigen::Index>(i)) = y(test_rows[i]);
    }
    const Eigen::VectorXd y_pred = model.predict(X_test);
    r2_sum += r_squared(y_test, y_pred);
    rs_sum += spearman(y_test, y_pred);
  }
  return {r2_sum / folds.k, rs_sum / folds.k};
}

namespace {

struct BenchmarkConfig {
  std::string name;
  TrainOptions options;
};

std::vector<BenchmarkConfig> benchmark_configs(std::uint64_t seed, int threads) {
  TrainOptions ridge;
  ridge.kind = ModelKind::ridge;
  ridge.alpha = 1.0;
  ridge.transform_scales = true;
  ridge.seed = seed;
  ridge.threads = threads;

  TrainOptions forest = ridge;
  forest.kind = ModelKind::forest;

  TrainOptions min_ridge = ridge;
  min_ridge.rfe_target = kNumFeatures / 2;
  TrainOptions min_forest = forest;
  min_forest.rfe_target = kNumFeatures / 2;

  // Baselines: unregularized single-feature linear fits on raw statistics.
  TrainOptions followers_baseline;
  followers_baseline.kind = ModelKind::ridge;
  followers_baseline.alpha = 0.0;
  followers_baseline.transform_scales = false;
  followers_baseline.active_features = {kFollowersFeature};
  followers_baseline.seed = seed;
  followers_baseline.threads = threads;

  TrainOptions likes_baseline = followers_baseline;
  likes_baseline.active_features = {kLikesAvgFeature};

  return {{"full Ridge Regression", ridge},
          {"full Random Forest", forest},
          {"minimal Ridge Regression", min_ridge},
          {"minimal Random Forest", min_forest},
          {"Followers Baseline", followers_baseline},
          {"Likes Baseline", likes_baseline}};
}

}  // namespace

EvalReport run_benchmark(const Dataset& dataset, std::uint64_t seed, int threads) {
  const int n = static_cast<int>(dataset.users.size());
  if (n < 100) throw Error(Errc::too_few_users, "benchmark needs at least 100 users");
  const FoldSplit folds = kfold_split(n, 5, seed);

  EvalReport report;
  report.seed = seed;
  report.n_users = n;
  report.k_folds = folds.k;

  std::uint64_t config_index = 0;
  for (const auto& bc : benchmark_configs(seed, threads)) {
    EvalRow row;
    row.model_name = bc.name;

    TrainOptions plain = bc.options;
    plain.seed = derive_seed(seed, config_index * 2);
    const MetricPair pm = evaluate_config(dataset, plain, folds);
    row.r2_regression = pm.r2;
    row.rs_regression = pm.rs;

    TrainOptions multi = bc.options;
    multi.multi = true;
    multi.k_clusters = 3;
    multi.seed = derive_seed(seed, config_index * 2 + 1);
    const MetricPair mm = evaluate_config(dataset, multi, folds);
    row.r2_multi = mm.r2;
    row.rs_multi = mm.rs;

    report.rows.push_back(std::move(row));
    ++config_index;
  }
  return report;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"model_name", r.model_name},
                    {"r2_regression", r.r2_regression},
                    {"rs_regression", r.rs_regression},
                    {"r2_multi", r.r2_multi},
                    {"rs_multi", r.rs_multi}});
  }
  return {{"format", "viewrank-eval-report"},
          {"rows", std::move(rows)},
          {"metadata",
           {{"seed", report.seed},
            {"n_users", report.n_users},
            {"k_folds", report.k_folds},
            {"timestamp", nullptr}}}};
}

std::string report_to_text(const EvalReport& report) {
  std::ostringstream out;
  const int name_width = 26;
  out << "Model";
  for (int i = 5; i < name_width; ++i) out << ' ';
  out << "|  Regression R2 |  Regression rs |       Multi R2 |       Multi rs\n";
  for (int i = 0; i < name_width + 4 * 17; ++i) out << '-';
  out << '\n';
  char buf[128];
  for (const auto& r : report.rows) {
    out << r.model_name;
    for (int i = static_cast<int>(r.model_name.size()); i < name_width; ++i) out << ' ';
    std::snprintf(buf, sizeof(buf), "| %14.3f | %14.3f | %14.3f | %14.3f",
                  r.r2_regression, r.rs_regression, r.r2_multi, r.rs_multi);
    out << buf << '\n';
  }
  return out.str();
}

}  // namespace viewrank
