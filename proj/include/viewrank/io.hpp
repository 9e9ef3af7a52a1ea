#pragma once

#include <string>

#include "viewrank/synth.hpp"

namespace viewrank {

// Metadata comment block stamped on every written artifact. Contains no
// wall-clock values, so identical inputs produce identical bytes.
struct ArtifactMeta {
  std::string command;  // CLI invocation or API call that produced the file
  std::uint64_t seed = 0;
};

std::string meta_header(const ArtifactMeta& meta);

void write_posts_jsonl(const std::string& path, const Dataset& dataset, const ArtifactMeta& meta);
void write_users_csv(const std::string& path, const Dataset& dataset, const ArtifactMeta& meta);
void write_edges_csv(const std::string& path, const std::vector<EngagementEdge>& edges,
                     const ArtifactMeta& meta);
void write_ground_truth_csv(const std::string& path, const std::map<std::string, double>& truth,
                            const ArtifactMeta& meta);
void write_aggregates_csv(const std::string& path, const Dataset& dataset,
                          const ArtifactMeta& meta);

// Header: user_id,likes_avg,comments_avg,followers,geo_mean,followers_per_post,
// comments_per_likes,focus_diff,focus_ratio,influence. Features are RAW;
// models apply their own scale transform.
void write_features_csv(const std::string& path, const Dataset& dataset, const ArtifactMeta& meta);

struct FeatureTable {
  std::vector<std::string> user_ids;
  Eigen::MatrixXd X_raw;      // n x 8
  Eigen::VectorXd influence;  // n
};

FeatureTable read_features_csv(const std::string& path);

std::vector<EngagementEdge> read_edges_csv(const std::string& path);
std::map<std::string, double> read_influence_csv(const std::string& path);

// posts + users files -> filtered dataset with outlier removal applied.
Dataset ingest(const std::string& posts_path, PostFormat format, const std::string& users_path,
               int min_posts = 10, double z_threshold = 2.0);

void write_scores_csv(const std::string& path, const std::map<std::string, double>& scores,
                      const ArtifactMeta& meta);

void write_ranking_csv(const std::string& path, const std::vector<std::string>& user_ids,
                       const Eigen::VectorXd& predictions, const ArtifactMeta& meta);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace viewrank
