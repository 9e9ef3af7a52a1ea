#pragma once

#include <array>

#include <Eigen/Dense>

#include "viewrank/dataset.hpp"

namespace viewrank {

inline constexpr int kNumFeatures = 8;
inline constexpr int kLikesAvgFeature = 0;
inline constexpr int kFollowersFeature = 2;

extern const std::array<const char*, kNumFeatures> kFeatureNames;

struct FeatureVector {
  double likes_avg = 0.0;
  double comments_avg = 0.0;
  double followers = 0.0;
  double geo_mean_likes_followers = 0.0;
  double followers_per_post = 0.0;
  double comments_per_likes = 0.0;
  double focus_diff = 0.0;   // max engagement - min engagement
  double focus_ratio = 0.0;  // max engagement / min engagement

  std::array<double, kNumFeatures> as_array() const {
    return {likes_avg, comments_avg,      followers,  geo_mean_likes_followers,
            followers_per_post, comments_per_likes, focus_diff, focus_ratio};
  }
};

// x / max(1, ln x). Identity on [0, e], monotone non-decreasing, continuous.
double log_scale(double x);

// All 8 per-user statistics from the retained posts. Engagement of a post is
// likes + comments. followers_per_post divides by the lifetime post count.
// With transform_scales, likes_avg and followers are replaced by log_scale of
// their raw values after everything derived from them has been computed.
FeatureVector extract_features(const UserAggregate& user, bool transform_scales);

struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;  // sample std (n-1); degenerate columns get 1
};

Standardizer fit_standardizer(const Eigen::MatrixXd& matrix);
Eigen::MatrixXd apply_standardizer(const Standardizer& params, const Eigen::MatrixXd& matrix);

// n x 8 raw (untransformed) matrix, row order = dataset user order.
Eigen::MatrixXd feature_matrix(const Dataset& dataset);

// log_scale applied to the likes_avg and followers columns.
Eigen::MatrixXd apply_scale_transform(const Eigen::MatrixXd& raw);

}  // namespace viewrank
