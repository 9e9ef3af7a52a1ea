#include "viewrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "viewrank/error.hpp"
#include "viewrank/rng.hpp"

namespace viewrank {

namespace {

void validate(const SynthConfig& c) {
  const bool ok = c.n_users >= 10 && c.posts_min >= 1 && c.posts_max >= c.posts_min &&
                  c.log_views_sigma > 0.0 && c.follower_mult_min > 1.0 &&
                  c.follower_mult_max >= c.follower_mult_min && c.engagement_rate_min > 0.0 &&
                  c.engagement_rate_max >= c.engagement_rate_min && c.comment_to_like_min >= 0.0 &&
                  c.comment_to_like_max >= c.comment_to_like_min &&
                  c.anomaly_sponsored_frac >= 0.0 && c.anomaly_sponsored_frac <= 1.0 &&
                  c.anomaly_bought_frac >= 0.0 && c.anomaly_bought_frac <= 1.0 &&
                  c.anomaly_sponsored_frac + c.anomaly_bought_frac <= 1.0 && c.noise_sigma >= 0.0;
  if (!ok) throw Error(Errc::invalid_config, "synthetic generator config is invalid");
}

std::string user_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "u%05d", i);
  return buf;
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(rng.uniform(std::log(lo), std::log(hi)));
}

}  // namespace

SynthOutput generate(const SynthConfig& config) {
  validate(config);
  SynthOutput out;
  out.dataset.provenance = Provenance::synthetic;
  out.dataset.seed = config.seed;

  // Anomalies are dealt out by quota so the requested fractions are met
  // exactly (bought first, so its floor(frac * total) lower bound holds).
  long long post_counter = 0, bought_done = 0, sponsored_done = 0;

  for (int u = 0; u < config.n_users; ++u) {
    Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(u)));
    UserAggregate user;
    user.user_id = user_name(u);

    const double view_scale =
        std::exp(config.log_views_mu + config.log_views_sigma * rng.normal());
    const double mult = log_uniform(rng, config.follower_mult_min, config.follower_mult_max);
    user.followers = std::max<long long>(2, std::llround(view_scale * mult));
    const double rate = log_uniform(rng, config.engagement_rate_min, config.engagement_rate_max);
    const double comment_ratio = rng.uniform(config.comment_to_like_min, config.comment_to_like_max);

    const int n_posts =
        config.posts_min +
        static_cast<int>(rng.next_below(
            static_cast<std::uint64_t>(config.posts_max - config.posts_min + 1)));

    for (int p = 0; p < n_posts; ++p) {
      PostRecord post;
      post.user_id = user.user_id;
      char pid[16];
      std::snprintf(pid, sizeof(pid), "p%03d", p);
      post.post_id = pid;

      ++post_counter;
      const bool bought =
          static_cast<double>(bought_done) < config.anomaly_bought_frac * post_counter;
      const bool sponsored =
          !bought &&
          static_cast<double>(sponsored_done) < config.anomaly_sponsored_frac * post_counter;
      bought_done += bought ? 1 : 0;
      sponsored_done += sponsored ? 1 : 0;

      // mean-one multiplicative noise on the user's latent view scale
      const double noise = std::exp(config.noise_sigma * rng.normal() -
                                    config.noise_sigma * config.noise_sigma / 2.0);
      post.views = std::max<long long>(1, std::llround(view_scale * noise));

      if (sponsored) {
        // externally referenced / massively engaged: views exceed followers
        post.views = std::max<long long>(
            user.followers + 1, std::llround(user.followers * rng.uniform(1.2, 2.5)));
      } else if (post.views >= user.followers) {
        post.views = user.followers - 1;  // normal regime: audience bounds views
      }

      if (bought) {
        // automation / reciprocity: engagements exceed views
        const long long engagements =
            std::max<long long>(post.views + 1, std::llround(post.views * rng.uniform(1.05, 1.6)));
        post.comments = std::llround(static_cast<double>(engagements) * comment_ratio /
                                     (1.0 + comment_ratio));
        post.likes = engagements - post.comments;
      } else {
        post.likes = std::llround(static_cast<double>(post.views) * rate);
        post.comments = std::llround(static_cast<double>(post.likes) * comment_ratio);
        if (post.likes + post.comments >= post.views) {
          post.likes = std::max<long long>(0, post.views - 1 - post.comments);
          if (post.likes + post.comments >= post.views) {
            post.comments = std::max<long long>(0, post.views - 1 - post.likes);
          }
        }
      }
      user.posts.push_back(std::move(post));
    }

    user.post_count_total = user.posts.size();
    user.influence = compute_influence(user.posts);
    out.ground_truth[user.user_id] = user.influence;
    out.dataset.users.push_back(std::move(user));
  }

  // Commentator graph: each user's comment budget is spent on authors drawn
  // with probability proportional to author followers.
  std::vector<double> cumulative(out.dataset.users.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.dataset.users.size(); ++i) {
    acc += static_cast<double>(out.dataset.users[i].followers);
    cumulative[i] = acc;
  }
  for (std::size_t i = 0; i < out.dataset.users.size(); ++i) {
    const auto& commenter = out.dataset.users[i];
    long long budget = 0;
    for (const auto& p : commenter.posts) budget += p.comments;
    budget = std::min<long long>(budget, 200);

    Rng rng(derive_seed(config.seed, 0xed6e0000ULL + static_cast<std::uint64_t>(i)));
    std::map<std::string, long long> counts;
    for (long long c = 0; c < budget; ++c) {
      const double r = rng.next_double() * acc;
      const std::size_t author = static_cast<std::size_t>(
          std::lower_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
      if (author == i || author >= out.dataset.users.size()) continue;  // no self-loops
      ++counts[out.dataset.users[author].user_id];
    }
    for (const auto& [target, weight] : counts) {
      out.edges.push_back({commenter.user_id, target, weight});
    }
  }
  return out;
}

}  // namespace viewrank
