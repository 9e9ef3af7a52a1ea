#include "viewrank/model_io.hpp"

#include <cmath>

#include "viewrank/error.hpp"

namespace viewrank {

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd from_vec(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> followers_column(const Eigen::MatrixXd& X_raw) {
  std::vector<double> f(static_cast<std::size_t>(X_raw.rows()));
  for (Eigen::Index i = 0; i < X_raw.rows(); ++i) {
    f[static_cast<std::size_t>(i)] = X_raw(i, kFollowersFeature);
  }
  return f;
}

nlohmann::json linear_to_json(const LinearModel& m) {
  nlohmann::json j{{"kind", "linear"},
                   {"weights", to_vec(m.weights)},
                   {"intercept", m.intercept},
                   {"alpha", m.alpha},
                   {"active_features", m.active_features}};
  if (m.standardizer) {
    j["standardizer"] = {{"mean", to_vec(m.standardizer->mean)},
                         {"std", to_vec(m.standardizer->std)}};
  } else {
    j["standardizer"] = nullptr;
  }
  return j;
}

LinearModel linear_from_json(const nlohmann::json& j) {
  LinearModel m;
  m.weights = from_vec(j.at("weights").get<std::vector<double>>());
  m.intercept = j.at("intercept").get<double>();
  m.alpha = j.at("alpha").get<double>();
  m.active_features = j.at("active_features").get<std::vector<int>>();
  if (!j.at("standardizer").is_null()) {
    Standardizer s;
    s.mean = from_vec(j["standardizer"].at("mean").get<std::vector<double>>());
    s.std = from_vec(j["standardizer"].at("std").get<std::vector<double>>());
    m.standardizer = std::move(s);
  }
  return m;
}

nlohmann::json tree_to_json(const RegressionTree& tree, int idx) {
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
  if (node.is_leaf()) return nlohmann::json{{"value", node.value}};
  return nlohmann::json{{"feature", node.feature},
                        {"threshold", node.threshold},
                        {"left", tree_to_json(tree, node.left)},
                        {"right", tree_to_json(tree, node.right)}};
}

int tree_from_json(const nlohmann::json& j, RegressionTree& tree) {
  const int idx = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  if (j.contains("value")) {
    tree.nodes[static_cast<std::size_t>(idx)].value = j.at("value").get<double>();
    return idx;
  }
  tree.nodes[static_cast<std::size_t>(idx)].feature = j.at("feature").get<int>();
  tree.nodes[static_cast<std::size_t>(idx)].threshold = j.at("threshold").get<double>();
  const int left = tree_from_json(j.at("left"), tree);
  tree.nodes[static_cast<std::size_t>(idx)].left = left;
  const int right = tree_from_json(j.at("right"), tree);
  tree.nodes[static_cast<std::size_t>(idx)].right = right;
  return idx;
}

nlohmann::json forest_config_to_json(const ForestConfig& c) {
  return {{"n_trees", c.n_trees},
          {"min_samples_leaf", c.min_samples_leaf},
          {"max_features_per_split", c.max_features_per_split},
          {"bootstrap", c.bootstrap},
          {"seed", c.seed}};
}

ForestConfig forest_config_from_json(const nlohmann::json& j) {
  ForestConfig c;
  c.n_trees = j.at("n_trees").get<int>();
  c.min_samples_leaf = j.at("min_samples_leaf").get<int>();
  c.max_features_per_split = j.at("max_features_per_split").get<int>();
  c.bootstrap = j.at("bootstrap").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

nlohmann::json forest_to_json(const ForestModel& m) {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : m.trees) trees.push_back(tree_to_json(t, 0));
  return {{"kind", "forest"},
          {"config", forest_config_to_json(m.config)},
          {"active_features", m.active_features},
          {"split_gain", m.split_gain},
          {"trees", std::move(trees)}};
}

ForestModel forest_from_json(const nlohmann::json& j) {
  ForestModel m;
  m.config = forest_config_from_json(j.at("config"));
  m.active_features = j.at("active_features").get<std::vector<int>>();
  m.split_gain = j.at("split_gain").get<std::vector<double>>();
  for (const auto& tj : j.at("trees")) {
    RegressionTree tree;
    tree_from_json(tj, tree);
    m.trees.push_back(std::move(tree));
  }
  return m;
}

nlohmann::json multi_to_json(const MultiRegressionModel& m) {
  nlohmann::json clusters = nlohmann::json::array();
  for (const auto& cm : m.cluster_models) {
    if (std::holds_alternative<LinearModel>(cm)) {
      clusters.push_back(linear_to_json(std::get<LinearModel>(cm)));
    } else {
      clusters.push_back(forest_to_json(std::get<ForestModel>(cm)));
    }
  }
  return {{"kind", "multi"},
          {"centroids", m.kmeans.centroids},
          {"inertia", m.kmeans.inertia},
          {"k", m.kmeans.k},
          {"restarts", m.kmeans.restarts},
          {"seed", m.kmeans.seed},
          {"followers_feature_index", m.followers_feature_index},
          {"cluster_models", std::move(clusters)}};
}

MultiRegressionModel multi_from_json(const nlohmann::json& j) {
  MultiRegressionModel m;
  m.kmeans.centroids = j.at("centroids").get<std::vector<double>>();
  m.kmeans.inertia = j.at("inertia").get<double>();
  m.kmeans.k = j.at("k").get<int>();
  m.kmeans.restarts = j.at("restarts").get<int>();
  m.kmeans.seed = j.at("seed").get<std::uint64_t>();
  m.followers_feature_index = j.at("followers_feature_index").get<int>();
  for (const auto& cj : j.at("cluster_models")) {
    if (cj.at("kind") == "linear") {
      m.cluster_models.emplace_back(linear_from_json(cj));
    } else {
      m.cluster_models.emplace_back(forest_from_json(cj));
    }
  }
  return m;
}

}  // namespace

Eigen::VectorXd TrainedModel::predict(const Eigen::MatrixXd& X_raw) const {
  const Eigen::MatrixXd X =
      options.transform_scales ? apply_scale_transform(X_raw) : X_raw;
  if (std::holds_alternative<LinearModel>(impl)) {
    return predict_linear(std::get<LinearModel>(impl), X);
  }
  if (std::holds_alternative<ForestModel>(impl)) {
    return predict_forest(std::get<ForestModel>(impl), X);
  }
  return predict_multi(std::get<MultiRegressionModel>(impl), X, followers_column(X_raw));
}

TrainedModel train_model(const Eigen::MatrixXd& X_raw, const Eigen::VectorXd& y,
                         const TrainOptions& options) {
  const Eigen::MatrixXd X =
      options.transform_scales ? apply_scale_transform(X_raw) : X_raw;
  Eigen::VectorXd target = y;
  if (options.log_target) {
    for (Eigen::Index i = 0; i < target.size(); ++i) target(i) = log_scale(target(i));
  }

  ModelHyper hyper;
  hyper.alpha = options.alpha;
  hyper.forest = options.forest;
  hyper.forest.seed = options.seed;

  std::vector<int> active = options.active_features;
  if (active.empty()) {
    if (options.rfe_target > 0 && options.rfe_target < static_cast<int>(X.cols())) {
      active = rfe(X, target, options.kind, hyper, options.rfe_target, options.threads);
    } else {
      for (int j = 0; j < static_cast<int>(X.cols()); ++j) active.push_back(j);
    }
  }

  TrainedModel model;
  model.options = options;
  model.options.active_features = active;
  model.options.forest = hyper.forest;

  if (options.multi) {
    BaseModelSpec base;
    base.kind = options.kind;
    base.hyper = hyper;
    base.active_features = active;
    model.impl = fit_multi(X, target, followers_column(X_raw), options.k_clusters, base,
                           options.seed, options.threads);
  } else if (options.kind == ModelKind::ridge) {
    model.impl = train_ridge(X, target, options.alpha, active);
  } else {
    model.impl = fit_forest(X, target, hyper.forest, active, options.threads);
  }
  return model;
}

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json j;
  j["format"] = "viewrank-model";
  j["options"] = {{"kind", model.options.kind == ModelKind::ridge ? "ridge" : "forest"},
                  {"multi", model.options.multi},
                  {"k_clusters", model.options.k_clusters},
                  {"alpha", model.options.alpha},
                  {"forest", forest_config_to_json(model.options.forest)},
                  {"transform_scales", model.options.transform_scales},
                  {"log_target", model.options.log_target},
                  {"rfe_target", model.options.rfe_target},
                  {"active_features", model.options.active_features},
                  {"seed", model.options.seed}};
  if (std::holds_alternative<LinearModel>(model.impl)) {
    j["model"] = linear_to_json(std::get<LinearModel>(model.impl));
  } else if (std::holds_alternative<ForestModel>(model.impl)) {
    j["model"] = forest_to_json(std::get<ForestModel>(model.impl));
  } else {
    j["model"] = multi_to_json(std::get<MultiRegressionModel>(model.impl));
  }
  return j;
}

TrainedModel model_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("format", "") != "viewrank-model") {
    throw Error(Errc::invalid_config, "not a viewrank model document");
  }
  TrainedModel model;
  const auto& o = doc.at("options");
  model.options.kind = o.at("kind") == "ridge" ? ModelKind::ridge : ModelKind::forest;
  model.options.multi = o.at("multi").get<bool>();
  model.options.k_clusters = o.at("k_clusters").get<int>();
  model.options.alpha = o.at("alpha").get<double>();
  model.options.forest = forest_config_from_json(o.at("forest"));
  model.options.transform_scales = o.at("transform_scales").get<bool>();
  model.options.log_target = o.at("log_target").get<bool>();
  model.options.rfe_target = o.at("rfe_target").get<int>();
  model.options.active_features = o.at("active_features").get<std::vector<int>>();
  model.options.seed = o.at("seed").get<std::uint64_t>();

  const auto& m = doc.at("model");
  const std::string kind = m.at("kind").get<std::string>();
  if (kind == "linear") {
    model.impl = linear_from_json(m);
  } else if (kind == "forest") {
    model.impl = forest_from_json(m);
  } else if (kind == "multi") {
    model.impl = multi_from_json(m);
  } else {
    throw Error(Errc::invalid_config, "unknown model kind: " + kind);
  }
  return model;
}

}  // namespace viewrank
