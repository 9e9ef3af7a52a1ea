#include "viewrank/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "viewrank/error.hpp"

namespace viewrank {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::ok: return "ok";
    case Errc::malformed_line: return "MalformedLine";
    case Errc::duplicate_post: return "DuplicatePost";
    case Errc::degenerate_user: return "DegenerateUser";
    case Errc::empty_posts: return "EmptyPosts";
    case Errc::negative_input: return "NegativeInput";
    case Errc::too_few_rows: return "TooFewRows";
    case Errc::singular_system: return "SingularSystem";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::too_few_samples: return "TooFewSamples";
    case Errc::unfitted_model: return "UnfittedModel";
    case Errc::too_few_distinct_values: return "TooFewDistinctValues";
    case Errc::centroid_collapse: return "CentroidCollapse";
    case Errc::cluster_too_small: return "ClusterTooSmall";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::constant_target: return "ConstantTarget";
    case Errc::degenerate_ranking: return "DegenerateRanking";
    case Errc::too_few_users: return "TooFewUsers";
    case Errc::invalid_fold: return "InvalidFold";
    case Errc::no_edges: return "NoEdges";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::io_error: return "IoError";
  }
  return "UnknownError";
}

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& reason) {
  throw Error(Errc::malformed_line,
              "line " + std::to_string(line_no) + ": " + reason);
}

long long require_count(const nlohmann::json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(line_no, std::string("missing field '") + key + "'");
  if (!it->is_number_integer()) malformed(line_no, std::string("field '") + key + "' is not an integer");
  const long long v = it->get<long long>();
  if (v < 0) malformed(line_no, std::string("field '") + key + "' is negative");
  return v;
}

std::string require_string(const nlohmann::json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) malformed(line_no, std::string("missing field '") + key + "'");
  if (!it->is_string()) malformed(line_no, std::string("field '") + key + "' is not a string");
  return it->get<std::string>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

long long parse_count_field(const std::string& s, const char* key, std::size_t line_no) {
  if (s.empty()) malformed(line_no, std::string("empty field '") + key + "'");
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    malformed(line_no, std::string("field '") + key + "' is not an integer");
  }
  if (pos != s.size()) malformed(line_no, std::string("field '") + key + "' is not an integer");
  if (v < 0) malformed(line_no, std::string("field '") + key + "' is negative");
  return v;
}

bool skippable(const std::string& line) {
  return line.empty() || line[0] == '#';
}

}  // namespace

std::vector<PostRecord> parse_posts(std::istream& in, PostFormat format) {
  std::vector<PostRecord> posts;
  // (user_id, post_id) -> line number of first occurrence
  std::unordered_map<std::string, std::size_t> seen;
  auto check_duplicate = [&](const PostRecord& p, std::size_t line_no) {
    const std::string key = p.user_id + '\x1f' + p.post_id;
    auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      throw Error(Errc::duplicate_post,
                  "duplicate (user_id, post_id) = (" + p.user_id + ", " + p.post_id +
                      ") at lines " + std::to_string(it->second) + " and " +
                      std::to_string(line_no));
    }
  };

  std::string line;
  std::size_t line_no = 0;

  if (format == PostFormat::jsonl) {
    while (std::getline(in, line)) {
      ++line_no;
      if (skippable(line)) continue;
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
      } catch (const nlohmann::json::parse_error& e) {
        malformed(line_no, std::string("invalid JSON: ") + e.what());
      }
      if (!obj.is_object()) malformed(line_no, "not a JSON object");
      PostRecord p;
      p.user_id = require_string(obj, "user_id", line_no);
      p.post_id = require_string(obj, "post_id", line_no);
      p.likes = require_count(obj, "likes", line_no);
      p.comments = require_count(obj, "comments", line_no);
      p.views = require_count(obj, "views", line_no);
      if (auto it = obj.find("published_at"); it != obj.end() && !it->is_null()) {
        if (!it->is_number_integer()) malformed(line_no, "field 'published_at' is not an integer");
        p.published_at = it->get<std::int64_t>();
      }
      check_duplicate(p, line_no);
      posts.push_back(std::move(p));
    }
    return posts;
  }

  // CSV: header row names the columns, order free.
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    header = split_csv_line(line);
    break;
  }
  if (header.empty()) return posts;
  auto col = [&](const char* name) -> int {
    auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int c_user = col("user_id"), c_post = col("post_id"), c_likes = col("likes"),
            c_comments = col("comments"), c_views = col("views"), c_time = col("published_at");
  for (const char* req : {"user_id", "post_id", "likes", "comments", "views"}) {
    if (col(req) < 0) malformed(line_no, std::string("header missing column '") + req + "'");
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != header.size()) malformed(line_no, "wrong number of fields");
    PostRecord p;
    p.user_id = fields[c_user];
    p.post_id = fields[c_post];
    if (p.user_id.empty()) malformed(line_no, "empty field 'user_id'");
    if (p.post_id.empty()) malformed(line_no, "empty field 'post_id'");
    p.likes = parse_count_field(fields[c_likes], "likes", line_no);
    p.comments = parse_count_field(fields[c_comments], "comments", line_no);
    p.views = parse_count_field(fields[c_views], "views", line_no);
    if (c_time >= 0 && !fields[c_time].empty()) {
      try {
        p.published_at = std::stoll(fields[c_time]);
      } catch (const std::exception&) {
        malformed(line_no, "field 'published_at' is not an integer");
      }
    }
    check_duplicate(p, line_no);
    posts.push_back(std::move(p));
  }
  return posts;
}

std::vector<UserAggregate> group_and_filter(
    const std::vector<PostRecord>& posts,
    const std::unordered_map<std::string, long long>& followers_by_user,
    int min_posts) {
  if (min_posts < 1) throw Error(Errc::invalid_config, "min_posts must be >= 1");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<PostRecord>> by_user;
  for (const auto& p : posts) {
    auto [it, inserted] = by_user.try_emplace(p.user_id);
    if (inserted) order.push_back(p.user_id);
    it->second.push_back(p);
  }

  std::vector<UserAggregate> users;
  for (const auto& uid : order) {
    auto& user_posts = by_user[uid];
    if (user_posts.size() < static_cast<std::size_t>(min_posts)) continue;
    auto fit = followers_by_user.find(uid);
    if (fit == followers_by_user.end()) continue;
    UserAggregate u;
    u.user_id = uid;
    u.followers = fit->second;
    u.post_count_total = user_posts.size();
    u.posts = std::move(user_posts);
    users.push_back(std::move(u));
  }
  return users;
}

double compute_influence(const std::vector<PostRecord>& posts) {
  if (posts.empty()) throw Error(Errc::empty_posts, "influence of an empty post list");
  double sum = 0.0;
  for (const auto& p : posts) sum += static_cast<double>(p.views);
  return sum / static_cast<double>(posts.size());
}

namespace {

double metric_of(const PostRecord& p, int m) {
  switch (m) {
    case 0: return static_cast<double>(p.views);
    case 1: return static_cast<double>(p.likes);
    default: return static_cast<double>(p.comments);
  }
}

}  // namespace

UserAggregate remove_outlier_posts(const UserAggregate& user, double z_threshold) {
  const auto& posts = user.posts;
  const std::size_t n = posts.size();
  std::vector<bool> drop(n, false);

  // Statistics fixed at entry; metrics applied in order views, likes, comments.
  for (int m = 0; m < 3; ++m) {
    double sum = 0.0;
    for (const auto& p : posts) sum += metric_of(p, m);
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& p : posts) {
      const double d = metric_of(p, m) - mean;
      ss += d * d;
    }
    const double std_dev = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    if (std_dev <= 0.0) continue;  // z := 0, nothing to remove

    std::size_t arg_max = 0, arg_min = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (metric_of(posts[i], m) > metric_of(posts[arg_max], m)) arg_max = i;
      if (metric_of(posts[i], m) < metric_of(posts[arg_min], m)) arg_min = i;
    }
    if ((metric_of(posts[arg_max], m) - mean) / std_dev > z_threshold) drop[arg_max] = true;
    if ((metric_of(posts[arg_min], m) - mean) / std_dev < -z_threshold) drop[arg_min] = true;
  }

  UserAggregate out;
  out.user_id = user.user_id;
  out.followers = user.followers;
  out.post_count_total = user.post_count_total;
  for (std::size_t i = 0; i < n; ++i) {
    if (!drop[i]) out.posts.push_back(posts[i]);
  }
  if (out.posts.size() < 2) {
    throw Error(Errc::degenerate_user,
                "user " + user.user_id + " has fewer than 2 posts after outlier removal");
  }
  out.influence = compute_influence(out.posts);
  return out;
}

std::unordered_map<std::string, long long> read_followers_csv(std::istream& in) {
  std::unordered_map<std::string, long long> followers;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  int c_user = -1, c_followers = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    const auto fields = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == "user_id") c_user = static_cast<int>(i);
        if (fields[i] == "followers") c_followers = static_cast<int>(i);
      }
      if (c_user < 0 || c_followers < 0) {
        malformed(line_no, "users CSV header must name user_id and followers");
      }
      continue;
    }
    if (fields.size() <= static_cast<std::size_t>(std::max(c_user, c_followers))) {
      malformed(line_no, "wrong number of fields");
    }
    const std::string& uid = fields[c_user];
    if (uid.empty()) malformed(line_no, "empty field 'user_id'");
    followers[uid] = parse_count_field(fields[c_followers], "followers", line_no);
  }
  return followers;
}

}  // namespace viewrank
