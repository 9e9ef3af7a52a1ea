#pragma once

#include <map>

#include "viewrank/evaluation.hpp"

namespace viewrank {

// Generator defaults target the observed marginals: user-level average views
// log-normal with mean exp(mu + sigma^2/2) = 748, followers exceeding views
// for normal users, and small fractions of anomalous posts.
struct SynthConfig {
  int n_users = 5000;
  int posts_min = 10;
  int posts_max = 40;
  double log_views_mu = 5.89743622840014;  // ln(748) - sigma^2/2 with sigma = 1.2
  double log_views_sigma = 1.2;
  double follower_mult_min = 2.0;   // log-uniform multiplier, followers = V * mult
  double follower_mult_max = 60.0;
  double engagement_rate_min = 0.05;  // likes per view, log-uniform
  double engagement_rate_max = 0.08;
  double comment_to_like_min = 0.10;
  double comment_to_like_max = 0.25;
  double anomaly_sponsored_frac = 0.01;  // posts with views > followers
  double anomaly_bought_frac = 0.01;     // posts with engagements > views
  double noise_sigma = 0.20;             // per-post multiplicative view noise
  std::uint64_t seed = 42;
};

struct SynthOutput {
  Dataset dataset;                             // influence = ground truth
  std::map<std::string, double> ground_truth;  // mean views per user, pre-filtering
  std::vector<EngagementEdge> edges;           // synthetic commentator graph
};

SynthOutput generate(const SynthConfig& config);

}  // namespace viewrank
