#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace viewrank {

struct PostRecord {
  std::string user_id;
  std::string post_id;
  long long likes = 0;
  long long comments = 0;
  long long views = 0;
  std::optional<std::int64_t> published_at;  // Unix seconds
};

struct UserAggregate {
  std::string user_id;
  long long followers = 0;
  std::vector<PostRecord> posts;      // retained posts
  std::size_t post_count_total = 0;   // lifetime count, before outlier removal
  double influence = 0.0;             // mean views over retained posts
};

enum class Provenance { ingested, synthetic };

struct Dataset {
  std::vector<UserAggregate> users;
  Provenance provenance = Provenance::ingested;
  std::optional<std::uint64_t> seed;
};

enum class PostFormat { jsonl, csv };

// Parse one PostRecord per line, in input order. Lines starting with '#'
// and blank lines are skipped; line numbers in errors are absolute.
std::vector<PostRecord> parse_posts(std::istream& in, PostFormat format);

// Group posts by user, keep users with >= min_posts posts and a followers
// entry; others are silently dropped. Influence is not populated here.
// Users come out in order of first appearance in the post list.
std::vector<UserAggregate> group_and_filter(
    const std::vector<PostRecord>& posts,
    const std::unordered_map<std::string, long long>& followers_by_user,
    int min_posts = 10);

// Univariate outlier removal on the extreme posts. Per metric (views, likes,
// comments, in that order) the max post is dropped when its z-score exceeds
// z_threshold and the min post when it falls below -z_threshold. Statistics
// are computed once, on the post set at entry; a post flagged by several
// metrics is removed once. z is defined as 0 when the sample std is 0.
// Influence is recomputed over the retained posts.
UserAggregate remove_outlier_posts(const UserAggregate& user, double z_threshold = 2.0);

// Mean views per post.
double compute_influence(const std::vector<PostRecord>& posts);

// Users CSV: header `user_id,followers`.
std::unordered_map<std::string, long long> read_followers_csv(std::istream& in);

}  // namespace viewrank
