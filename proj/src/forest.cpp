#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "viewrank/error.hpp"
#include "viewrank/models.hpp"
#include "viewrank/rng.hpp"

namespace viewrank {

double RegressionTree::predict_row(const Eigen::RowVectorXd& row) const {
  int idx = 0;
  while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
    const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
    idx = row(node.feature) <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(idx)].value;
}

namespace {

// CART builder over presorted per-feature index arrays. Each node owns the
// segment [lo, hi) of every feature's array; a split stable-partitions all
// segments so children stay sorted without re-sorting.
struct TreeBuilder {
  const Eigen::MatrixXd& X;  // column-selected training matrix
  const Eigen::VectorXd& y;
  const ForestConfig& cfg;
  int max_features;
  std::uint64_t tree_seed;

  RegressionTree tree;
  std::vector<double> gain;               // indexed by selected-column position
  std::vector<std::vector<int>> sorted;   // per feature: row ids sorted by value
  std::vector<int> scratch;
  std::vector<int> candidates;
  std::uint64_t node_counter = 0;

  int build(int lo, int hi) {
    const int count = hi - lo;
    const int d = static_cast<int>(X.cols());
    double sum = 0.0, sumsq = 0.0;
    for (int i = lo; i < hi; ++i) {
      const double v = y(sorted[0][static_cast<std::size_t>(i)]);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / count;
    const double sse = std::max(0.0, sumsq - sum * mean);

    const std::uint64_t node_id = node_counter++;
    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    tree.nodes.back().value = mean;

    if (count < 2 * cfg.min_samples_leaf || sse <= 1e-12) return node_index;

    // Feature subset for this node: seeded shuffle keyed by (tree, node) so
    // parallel tree construction matches sequential output.
    candidates.resize(static_cast<std::size_t>(d));
    std::iota(candidates.begin(), candidates.end(), 0);
    Rng node_rng(derive_seed(tree_seed, node_id));
    for (int i = d - 1; i > 0; --i) {
      const int j = static_cast<int>(node_rng.next_below(static_cast<std::uint64_t>(i + 1)));
      std::swap(candidates[static_cast<std::size_t>(i)], candidates[static_cast<std::size_t>(j)]);
    }
    const int n_candidates = std::min(max_features, d);

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_cost = sse;
    for (int c = 0; c < n_candidates; ++c) {
      const int f = candidates[static_cast<std::size_t>(c)];
      const std::vector<int>& rows = sorted[static_cast<std::size_t>(f)];
      double left_sum = 0.0, left_sumsq = 0.0;
      for (int i = lo; i + 1 < hi; ++i) {
        const double yv = y(rows[static_cast<std::size_t>(i)]);
        left_sum += yv;
        left_sumsq += yv * yv;
        const double xv = X(rows[static_cast<std::size_t>(i)], f);
        const double xn = X(rows[static_cast<std::size_t>(i + 1)], f);
        if (xv == xn) continue;
        const int nl = i + 1 - lo, nr = hi - (i + 1);
        if (nl < cfg.min_samples_leaf || nr < cfg.min_samples_leaf) continue;
        const double right_sum = sum - left_sum;
        const double right_sumsq = sumsq - left_sumsq;
        const double cost = std::max(0.0, left_sumsq - left_sum * left_sum / nl) +
                            std::max(0.0, right_sumsq - right_sum * right_sum / nr);
        if (cost < best_cost) {
          best_cost = cost;
          best_feature = f;
          best_threshold = (xv + xn) / 2.0;
        }
      }
    }
    if (best_feature < 0) return node_index;  // no valid split, stay a leaf

    gain[static_cast<std::size_t>(best_feature)] += sse - best_cost;

    // Stable partition every feature segment by the chosen split.
    int mid = lo;
    for (int f = 0; f < d; ++f) {
      std::vector<int>& rows = sorted[static_cast<std::size_t>(f)];
      scratch.clear();
      int write = lo;
      for (int i = lo; i < hi; ++i) {
        const int r = rows[static_cast<std::size_t>(i)];
        if (X(r, best_feature) <= best_threshold) {
          rows[static_cast<std::size_t>(write++)] = r;
        } else {
          scratch.push_back(r);
        }
      }
      mid = write;
      std::copy(scratch.begin(), scratch.end(), rows.begin() + write);
    }

    tree.nodes[static_cast<std::size_t>(node_index)].feature = best_feature;
    tree.nodes[static_cast<std::size_t>(node_index)].threshold = best_threshold;
    const int left = build(lo, mid);
    tree.nodes[static_cast<std::size_t>(node_index)].left = left;
    const int right = build(mid, hi);
    tree.nodes[static_cast<std::size_t>(node_index)].right = right;
    return node_index;
  }
};

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

ForestModel fit_forest(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y,
                       const ForestConfig& config, const std::vector<int>& active_features,
                       int threads) {
  if (X_full.rows() != y.size()) throw Error(Errc::length_mismatch, "X rows != y length");
  if (config.n_trees < 1) throw Error(Errc::invalid_config, "n_trees must be >= 1");
  const int n = static_cast<int>(X_full.rows());
  if (n < 2 * config.min_samples_leaf) {
    throw Error(Errc::too_few_samples, "need at least 2 * min_samples_leaf samples");
  }

  const Eigen::MatrixXd X = select_columns(X_full, active_features);
  const int d = static_cast<int>(X.cols());
  const int max_features = config.max_features_per_split > 0
                               ? std::min(config.max_features_per_split, d)
                               : (d + 2) / 3;

  ForestModel model;
  model.config = config;
  model.config.max_features_per_split = max_features;
  model.active_features = active_features;
  model.trees.resize(static_cast<std::size_t>(config.n_trees));
  model.split_gain.assign(static_cast<std::size_t>(d), 0.0);
  std::vector<std::vector<double>> per_tree_gain(static_cast<std::size_t>(config.n_trees));

  auto build_tree = [&](int t) {
    const std::uint64_t tree_seed = derive_seed(config.seed, static_cast<std::uint64_t>(t));
    std::vector<int> idx(static_cast<std::size_t>(n));
    if (config.bootstrap) {
      Rng boot(derive_seed(tree_seed, 0xb007));
      for (int i = 0; i < n; ++i) {
        idx[static_cast<std::size_t>(i)] =
            static_cast<int>(boot.next_below(static_cast<std::uint64_t>(n)));
      }
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }

    TreeBuilder builder{X, y, model.config, max_features, tree_seed, {}, {}, {}, {}, {}, 0};
    builder.gain.assign(static_cast<std::size_t>(d), 0.0);
    builder.sorted.resize(static_cast<std::size_t>(d));
    for (int f = 0; f < d; ++f) {
      auto& rows = builder.sorted[static_cast<std::size_t>(f)];
      rows = idx;
      std::stable_sort(rows.begin(), rows.end(),
                       [&](int a, int b) { return X(a, f) < X(b, f); });
    }
    builder.scratch.reserve(static_cast<std::size_t>(n));
    builder.build(0, n);
    model.trees[static_cast<std::size_t>(t)] = std::move(builder.tree);
    per_tree_gain[static_cast<std::size_t>(t)] = std::move(builder.gain);
  };

  if (threads <= 1 || config.n_trees == 1) {
    for (int t = 0; t < config.n_trees; ++t) build_tree(t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min(threads, config.n_trees);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < config.n_trees; t = next.fetch_add(1)) {
          build_tree(t);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& g : per_tree_gain) {
    for (int j = 0; j < d; ++j) {
      model.split_gain[static_cast<std::size_t>(j)] += g[static_cast<std::size_t>(j)];
    }
  }
  return model;
}

Eigen::VectorXd predict_forest(const ForestModel& model, const Eigen::MatrixXd& X_full) {
  if (model.trees.empty()) throw Error(Errc::unfitted_model, "forest has no trees");
  const Eigen::MatrixXd X = select_columns(X_full, model.active_features);
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    double sum = 0.0;
    const Eigen::RowVectorXd row = X.row(i);
    for (const auto& tree : model.trees) sum += tree.predict_row(row);
    out(i) = sum / static_cast<double>(model.trees.size());
  }
  return out;
}

std::vector<double> feature_importance(const ForestModel& model) {
  if (model.trees.empty()) throw Error(Errc::unfitted_model, "forest has no trees");
  std::vector<double> importance = model.split_gain;
  const double total = std::accumulate(importance.begin(), importance.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : importance) v /= total;
  }
  return importance;
}

}  // namespace viewrank
