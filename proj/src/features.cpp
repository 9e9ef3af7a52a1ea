#include "viewrank/features.hpp"

#include <cmath>
#include <limits>

#include "viewrank/error.hpp"

namespace viewrank {

const std::array<const char*, kNumFeatures> kFeatureNames = {
    "likes_avg",          "comments_avg",       "followers", "geo_mean",
    "followers_per_post", "comments_per_likes", "focus_diff", "focus_ratio"};

double log_scale(double x) {
  if (x < 0.0) throw Error(Errc::negative_input, "log_scale of a negative value");
  if (x == 0.0) return 0.0;
  return x / std::max(1.0, std::log(x));
}

FeatureVector extract_features(const UserAggregate& user, bool transform_scales) {
  if (user.posts.empty()) throw Error(Errc::empty_posts, "user " + user.user_id + " has no posts");

  const double n = static_cast<double>(user.posts.size());
  double likes_sum = 0.0, comments_sum = 0.0;
  double eng_max = -std::numeric_limits<double>::infinity();
  double eng_min = std::numeric_limits<double>::infinity();
  for (const auto& p : user.posts) {
    likes_sum += static_cast<double>(p.likes);
    comments_sum += static_cast<double>(p.comments);
    const double eng = static_cast<double>(p.likes + p.comments);
    eng_max = std::max(eng_max, eng);
    eng_min = std::min(eng_min, eng);
  }

  FeatureVector f;
  f.likes_avg = likes_sum / n;
  f.comments_avg = comments_sum / n;
  f.followers = static_cast<double>(user.followers);
  f.geo_mean_likes_followers = std::sqrt(f.likes_avg * f.followers);
  f.followers_per_post = user.post_count_total > 0
                             ? f.followers / static_cast<double>(user.post_count_total)
                             : 0.0;
  f.comments_per_likes = f.likes_avg > 0.0 ? f.comments_avg / f.likes_avg : 0.0;
  f.focus_diff = eng_max - eng_min;
  f.focus_ratio = eng_min > 0.0 ? eng_max / eng_min : eng_max + 1.0;

  if (transform_scales) {
    f.likes_avg = log_scale(f.likes_avg);
    f.followers = log_scale(f.followers);
  }
  return f;
}

Standardizer fit_standardizer(const Eigen::MatrixXd& matrix) {
  const Eigen::Index n = matrix.rows();
  if (n < 2) throw Error(Errc::too_few_rows, "standardizer needs at least 2 rows");
  Standardizer params;
  params.mean = matrix.colwise().mean();
  Eigen::MatrixXd centered = matrix.rowwise() - params.mean.transpose();
  params.std = (centered.array().square().colwise().sum() / static_cast<double>(n - 1))
                   .sqrt()
                   .matrix()
                   .transpose();
  for (Eigen::Index j = 0; j < params.std.size(); ++j) {
    if (params.std(j) < 1e-12) params.std(j) = 1.0;
  }
  return params;
}

Eigen::MatrixXd apply_standardizer(const Standardizer& params, const Eigen::MatrixXd& matrix) {
  if (matrix.cols() != params.mean.size()) {
    throw Error(Errc::dimension_mismatch, "standardizer column count mismatch");
  }
  Eigen::MatrixXd out = matrix.rowwise() - params.mean.transpose();
  out.array().rowwise() /= params.std.transpose().array();
  return out;
}

Eigen::MatrixXd feature_matrix(const Dataset& dataset) {
  Eigen::MatrixXd X(dataset.users.size(), kNumFeatures);
  for (std::size_t i = 0; i < dataset.users.size(); ++i) {
    const auto row = extract_features(dataset.users[i], false).as_array();
    for (int j = 0; j < kNumFeatures; ++j) X(static_cast<Eigen::Index>(i), j) = row[j];
  }
  return X;
}

Eigen::MatrixXd apply_scale_transform(const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd out = raw;
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    out(i, kLikesAvgFeature) = log_scale(out(i, kLikesAvgFeature));
    out(i, kFollowersFeature) = log_scale(out(i, kFollowersFeature));
  }
  return out;
}

}  // namespace viewrank
