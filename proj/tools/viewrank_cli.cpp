#include <cstdint>
#include <cstdio>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "viewrank_c.h"

namespace {

std::string g_command_line;

int fail(int code) {
  std::fprintf(stderr, "error: %s\n", vr_last_error());
  return code == VR_ERR_CONFIG ? 2 : 1;
}

struct DatasetArgs {
  std::string posts;
  std::string users;
  std::string format = "jsonl";
  int min_posts = 10;
  double z_threshold = 2.0;
};

void add_dataset_options(CLI::App* cmd, DatasetArgs& args) {
  cmd->add_option("--posts", args.posts, "posts file (JSONL or CSV)")->required();
  cmd->add_option("--users", args.users, "users CSV (user_id,followers)")->required();
  cmd->add_option("--format", args.format, "posts format: jsonl or csv")
      ->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--min-posts", args.min_posts, "minimum posts per retained user");
  cmd->add_option("--z-threshold", args.z_threshold, "outlier z-score threshold");
}

vr_dataset* ingest_or_die(const DatasetArgs& args) {
  vr_dataset* ds = vr_dataset_ingest(args.posts.c_str(), args.format.c_str(),
                                     args.users.c_str(), args.min_posts, args.z_threshold);
  if (ds == nullptr) {
    std::fprintf(stderr, "error: %s\n", vr_last_error());
    std::exit(1);
  }
  return ds;
}

struct ModelArgs {
  std::string kind = "ridge";
  bool multi = false;
  int k_clusters = 3;
  double alpha = 1.0;
  bool raw_scales = false;
  bool log_target = false;
  int rfe_target = 0;
  int n_trees = 100;
  int min_samples_leaf = 5;
  int max_features = 0;
  bool no_bootstrap = false;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
  cmd->add_option("--kind", args.kind, "model kind: ridge or forest")
      ->check(CLI::IsMember({"ridge", "forest"}));
  cmd->add_flag("--multi", args.multi, "segment by followers (K-Means) before fitting");
  cmd->add_option("--k-clusters", args.k_clusters, "number of follower segments");
  cmd->add_option("--alpha", args.alpha, "ridge l2 strength");
  cmd->add_flag("--raw-scales", args.raw_scales, "skip the x/ln x transform of likes/followers");
  cmd->add_flag("--log-target", args.log_target, "train on log-scaled influence");
  cmd->add_option("--rfe", args.rfe_target, "keep this many features via RFE (0 = all)");
  cmd->add_option("--trees", args.n_trees, "forest size");
  cmd->add_option("--min-samples-leaf", args.min_samples_leaf, "minimum samples per leaf");
  cmd->add_option("--max-features", args.max_features, "features per split (0 = ceil(d/3))");
  cmd->add_flag("--no-bootstrap", args.no_bootstrap, "disable bootstrap sampling");
}

std::string model_options_json(const ModelArgs& args, std::uint64_t seed, int threads) {
  nlohmann::json j{{"kind", args.kind},
                   {"multi", args.multi},
                   {"k_clusters", args.k_clusters},
                   {"alpha", args.alpha},
                   {"transform_scales", !args.raw_scales},
                   {"log_target", args.log_target},
                   {"rfe_target", args.rfe_target},
                   {"n_trees", args.n_trees},
                   {"min_samples_leaf", args.min_samples_leaf},
                   {"max_features_per_split", args.max_features},
                   {"bootstrap", !args.no_bootstrap},
                   {"seed", seed},
                   {"threads", threads}};
  return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 0; i < argc; ++i) {
    if (i > 0) g_command_line += ' ';
    g_command_line += argv[i];
  }
  const char* cmd = g_command_line.c_str();

  CLI::App app{"viewrank: influence measurement for pull-based social networks"};
  app.set_config("--config", "", "key=value config file; flags override it");
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  int threads = 1;
  app.add_option("--seed", seed, "master random seed")->capture_default_str();
  app.add_option("--threads", threads, "worker threads (output-invariant)");

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  std::string synth_out = "data";
  int n_users = 5000;
  std::string synth_config_json;
  synth->add_option("--out", synth_out, "output directory");
  synth->add_option("--users", n_users, "number of users");
  synth->add_option("--generator-json", synth_config_json,
                    "extra generator settings as a JSON object");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "parse, filter and aggregate post records");
  DatasetArgs ingest_args;
  std::string aggregates_out = "aggregates.csv";
  add_dataset_options(ingest_cmd, ingest_args);
  ingest_cmd->add_option("--out", aggregates_out, "aggregates CSV output");

  // features
  auto* features_cmd = app.add_subcommand("features", "write the per-user feature matrix");
  DatasetArgs features_args;
  std::string features_out = "features.csv";
  add_dataset_options(features_cmd, features_args);
  features_cmd->add_option("--out", features_out, "feature CSV output");

  // train
  auto* train_cmd = app.add_subcommand("train", "fit one model and save it as JSON");
  DatasetArgs train_args;
  ModelArgs model_args;
  std::string model_out = "model.json";
  add_dataset_options(train_cmd, train_args);
  add_model_options(train_cmd, model_args);
  train_cmd->add_option("--out", model_out, "model JSON output");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "run the cross-validated benchmark");
  DatasetArgs eval_args;
  std::string report_json = "report.json";
  std::string report_text = "report.txt";
  add_dataset_options(eval_cmd, eval_args);
  eval_cmd->add_option("--out-json", report_json, "report JSON output");
  eval_cmd->add_option("--out-table", report_text, "report text-table output");

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "rank users with a saved model");
  std::string rank_model = "model.json";
  std::string rank_features = "features.csv";
  std::string rank_out = "ranking.csv";
  rank_cmd->add_option("--model", rank_model, "model JSON");
  rank_cmd->add_option("--features", rank_features, "feature CSV");
  rank_cmd->add_option("--out", rank_out, "ranking CSV output");

  // pagerank
  auto* pr_cmd = app.add_subcommand("pagerank", "score a commentator graph");
  std::string pr_edges = "edges.csv";
  std::string pr_influence;
  std::string pr_out = "scores.csv";
  double damping = 0.85;
  pr_cmd->add_option("--edges", pr_edges, "edge CSV (source,target,weight)");
  pr_cmd->add_option("--influence", pr_influence, "influence CSV for rank correlation");
  pr_cmd->add_option("--out", pr_out, "scores CSV output");
  pr_cmd->add_option("--damping", damping, "damping factor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  if (synth->parsed()) {
    nlohmann::json config = nlohmann::json::object();
    if (!synth_config_json.empty()) {
      config = nlohmann::json::parse(synth_config_json, nullptr, false);
      if (config.is_discarded() || !config.is_object()) {
        std::fprintf(stderr, "error: --generator-json is not a JSON object\n");
        return 2;
      }
    }
    config["seed"] = seed;
    if (!config.contains("n_users") || synth->count("--users") > 0) config["n_users"] = n_users;
    const int rc = vr_synth_generate(config.dump().c_str(), synth_out.c_str(), cmd);
    return rc == VR_OK ? 0 : fail(rc);
  }

  if (ingest_cmd->parsed()) {
    vr_dataset* ds = ingest_or_die(ingest_args);
    const int rc = vr_dataset_write_aggregates(ds, aggregates_out.c_str(), cmd, seed);
    vr_dataset_free(ds);
    return rc == VR_OK ? 0 : fail(rc);
  }

  if (features_cmd->parsed()) {
    vr_dataset* ds = ingest_or_die(features_args);
    const int rc = vr_dataset_write_features(ds, features_out.c_str(), cmd, seed);
    vr_dataset_free(ds);
    return rc == VR_OK ? 0 : fail(rc);
  }

  if (train_cmd->parsed()) {
    vr_dataset* ds = ingest_or_die(train_args);
    vr_model* model = vr_model_train(ds, model_options_json(model_args, seed, threads).c_str());
    vr_dataset_free(ds);
    if (model == nullptr) return fail(VR_ERR_DATA);
    const int rc = vr_model_save(model, model_out.c_str());
    vr_model_free(model);
    return rc == VR_OK ? 0 : fail(rc);
  }

  if (eval_cmd->parsed()) {
    vr_dataset* ds = ingest_or_die(eval_args);
    const int rc = vr_eval_run(ds, seed, threads, report_json.c_str(), report_text.c_str(), cmd);
    vr_dataset_free(ds);
    return rc == VR_OK ? 0 : fail(rc);
  }

  if (rank_cmd->parsed()) {
    vr_model* model = vr_model_load(rank_model.c_str());
    if (model == nullptr) return fail(VR_ERR_DATA);
    const int rc = vr_model_rank(model, rank_features.c_str(), rank_out.c_str(), cmd, seed);
    vr_model_free(model);
    return rc == VR_OK ? 0 : fail(rc);
  }

  if (pr_cmd->parsed()) {
    double rs = 0.0;
    const int rc = vr_pagerank_run(pr_edges.c_str(),
                                   pr_influence.empty() ? nullptr : pr_influence.c_str(),
                                   pr_out.c_str(), damping, cmd, seed,
                                   pr_influence.empty() ? nullptr : &rs);
    if (rc != VR_OK) return fail(rc);
    if (!pr_influence.empty()) std::printf("spearman_vs_influence=%.6f\n", rs);
    return 0;
  }

  return 2;
}
