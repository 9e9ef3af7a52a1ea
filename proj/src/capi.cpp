#include "viewrank_c.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "viewrank/error.hpp"
#include "viewrank/io.hpp"
#include "viewrank/model_io.hpp"

#ifndef VIEWRANK_VERSION
#define VIEWRANK_VERSION "0.0.0"
#endif

using namespace viewrank;

struct vr_dataset {
  Dataset dataset;
};

struct vr_model {
  TrainedModel model;
};

namespace {

thread_local std::string g_last_error;

int code_of(const Error& e) {
  switch (e.code()) {
    case Errc::io_error:
      return VR_ERR_IO;
    case Errc::invalid_config:
      return VR_ERR_CONFIG;
    default:
      return VR_ERR_DATA;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return VR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return VR_ERR_INTERNAL;
  }
}

template <typename T, typename Fn>
T* guarded_new(Fn&& fn) {
  try {
    g_last_error.clear();
    return new T{fn()};
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return nullptr;
  }
}

SynthConfig synth_config_from_json(const char* config_json) {
  SynthConfig config;
  if (config_json == nullptr || std::string(config_json).empty()) return config;
  nlohmann::json j = nlohmann::json::parse(config_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::invalid_config, "synth config is not a JSON object");
  }
  config.n_users = j.value("n_users", config.n_users);
  config.posts_min = j.value("posts_min", config.posts_min);
  config.posts_max = j.value("posts_max", config.posts_max);
  config.log_views_mu = j.value("log_views_mu", config.log_views_mu);
  config.log_views_sigma = j.value("log_views_sigma", config.log_views_sigma);
  config.follower_mult_min = j.value("follower_mult_min", config.follower_mult_min);
  config.follower_mult_max = j.value("follower_mult_max", config.follower_mult_max);
  config.engagement_rate_min = j.value("engagement_rate_min", config.engagement_rate_min);
  config.engagement_rate_max = j.value("engagement_rate_max", config.engagement_rate_max);
  config.comment_to_like_min = j.value("comment_to_like_min", config.comment_to_like_min);
  config.comment_to_like_max = j.value("comment_to_like_max", config.comment_to_like_max);
  config.anomaly_sponsored_frac = j.value("anomaly_sponsored_frac", config.anomaly_sponsored_frac);
  config.anomaly_bought_frac = j.value("anomaly_bought_frac", config.anomaly_bought_frac);
  config.noise_sigma = j.value("noise_sigma", config.noise_sigma);
  config.seed = j.value("seed", config.seed);
  return config;
}

TrainOptions train_options_from_json(const char* options_json) {
  TrainOptions options;
  if (options_json == nullptr || std::string(options_json).empty()) return options;
  nlohmann::json j = nlohmann::json::parse(options_json, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(Errc::invalid_config, "train options are not a JSON object");
  }
  const std::string kind = j.value("kind", "ridge");
  if (kind == "ridge") {
    options.kind = ModelKind::ridge;
  } else if (kind == "forest") {
    options.kind = ModelKind::forest;
  } else {
    throw Error(Errc::invalid_config, "unknown model kind: " + kind);
  }
  options.multi = j.value("multi", options.multi);
  options.k_clusters = j.value("k_clusters", options.k_clusters);
  options.alpha = j.value("alpha", options.alpha);
  options.transform_scales = j.value("transform_scales", options.transform_scales);
  options.log_target = j.value("log_target", options.log_target);
  options.rfe_target = j.value("rfe_target", options.rfe_target);
  options.seed = j.value("seed", options.seed);
  options.threads = j.value("threads", options.threads);
  options.forest.n_trees = j.value("n_trees", options.forest.n_trees);
  options.forest.min_samples_leaf = j.value("min_samples_leaf", options.forest.min_samples_leaf);
  options.forest.max_features_per_split =
      j.value("max_features_per_split", options.forest.max_features_per_split);
  options.forest.bootstrap = j.value("bootstrap", options.forest.bootstrap);
  return options;
}

PostFormat format_from_string(const char* format) {
  const std::string f = format == nullptr ? "jsonl" : format;
  if (f == "jsonl") return PostFormat::jsonl;
  if (f == "csv") return PostFormat::csv;
  throw Error(Errc::invalid_config, "unknown posts format: " + f);
}

std::string or_empty(const char* s) { return s == nullptr ? std::string() : std::string(s); }

}  // namespace

extern "C" {

const char* vr_version(void) { return VIEWRANK_VERSION; }

const char* vr_last_error(void) { return g_last_error.c_str(); }

int vr_synth_generate(const char* config_json, const char* out_dir, const char* command) {
  return guarded([&] {
    const SynthConfig config = synth_config_from_json(config_json);
    const SynthOutput output = generate(config);
    const std::filesystem::path dir = or_empty(out_dir);
    std::filesystem::create_directories(dir);
    const ArtifactMeta meta{or_empty(command), config.seed};
    write_posts_jsonl((dir / "posts.jsonl").string(), output.dataset, meta);
    write_users_csv((dir / "users.csv").string(), output.dataset, meta);
    write_edges_csv((dir / "edges.csv").string(), output.edges, meta);
    write_ground_truth_csv((dir / "ground_truth.csv").string(), output.ground_truth, meta);
  });
}

vr_dataset* vr_dataset_ingest(const char* posts_path, const char* format, const char* users_path,
                              int min_posts, double z_threshold) {
  return guarded_new<vr_dataset>([&] {
    return ingest(or_empty(posts_path), format_from_string(format), or_empty(users_path),
                  min_posts, z_threshold);
  });
}

void vr_dataset_free(vr_dataset* dataset) { delete dataset; }

int vr_dataset_user_count(const vr_dataset* dataset) {
  return dataset == nullptr ? 0 : static_cast<int>(dataset->dataset.users.size());
}

int vr_dataset_write_aggregates(const vr_dataset* dataset, const char* path, const char* command,
                                uint64_t seed) {
  return guarded([&] {
    write_aggregates_csv(or_empty(path), dataset->dataset, ArtifactMeta{or_empty(command), seed});
  });
}

int vr_dataset_write_features(const vr_dataset* dataset, const char* path, const char* command,
                              uint64_t seed) {
  return guarded([&] {
    write_features_csv(or_empty(path), dataset->dataset, ArtifactMeta{or_empty(command), seed});
  });
}

vr_model* vr_model_train(const vr_dataset* dataset, const char* options_json) {
  return guarded_new<vr_model>([&] {
    const TrainOptions options = train_options_from_json(options_json);
    const Eigen::MatrixXd X_raw = feature_matrix(dataset->dataset);
    Eigen::VectorXd y(static_cast<Eigen::Index>(dataset->dataset.users.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      y(i) = dataset->dataset.users[static_cast<std::size_t>(i)].influence;
    }
    return train_model(X_raw, y, options);
  });
}

vr_model* vr_model_load(const char* path) {
  return guarded_new<vr_model>([&] {
    std::ifstream in(or_empty(path));
    if (!in) throw Error(Errc::io_error, "cannot open model file: " + or_empty(path));
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw Error(Errc::invalid_config, "model file is not valid JSON");
    return model_from_json(doc);
  });
}

int vr_model_save(const vr_model* model, const char* path) {
  return guarded([&] {
    std::ofstream out(or_empty(path), std::ios::binary);
    if (!out) throw Error(Errc::io_error, "cannot open model file: " + or_empty(path));
    out << model_to_json(model->model).dump(2) << "\n";
  });
}

void vr_model_free(vr_model* model) { delete model; }

int vr_model_rank(const vr_model* model, const char* features_csv, const char* out_csv,
                  const char* command, uint64_t seed) {
  return guarded([&] {
    const FeatureTable table = read_features_csv(or_empty(features_csv));
    const Eigen::VectorXd predictions = model->model.predict(table.X_raw);
    write_ranking_csv(or_empty(out_csv), table.user_ids, predictions,
                      ArtifactMeta{or_empty(command), seed});
  });
}

int vr_eval_run(const vr_dataset* dataset, uint64_t seed, int threads, const char* out_json,
                const char* out_text, const char* command) {
  return guarded([&] {
    const EvalReport report = run_benchmark(dataset->dataset, seed, threads);
    nlohmann::json doc = report_to_json(report);
    doc["metadata"]["command"] = or_empty(command);
    doc["metadata"]["version"] = VIEWRANK_VERSION;
    if (out_json != nullptr) write_text_file(out_json, doc.dump(2) + "\n");
    if (out_text != nullptr) write_text_file(out_text, report_to_text(report));
  });
}

int vr_pagerank_run(const char* edges_csv, const char* influence_csv, const char* out_scores_csv,
                    double damping, const char* command, uint64_t seed, double* rs_out) {
  return guarded([&] {
    const auto edges = read_edges_csv(or_empty(edges_csv));
    const auto scores = pagerank(edges, damping);
    write_scores_csv(or_empty(out_scores_csv), scores, ArtifactMeta{or_empty(command), seed});
    if (influence_csv != nullptr && rs_out != nullptr) {
      const auto influences = read_influence_csv(influence_csv);
      *rs_out = pagerank_rank_correlation(scores, influences);
    }
  });
}

}  // extern "C"
