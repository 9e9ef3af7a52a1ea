#include "viewrank/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "viewrank/error.hpp"

#ifndef VIEWRANK_VERSION
#define VIEWRANK_VERSION "0.0.0"
#endif

namespace viewrank {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open for reading: " + path);
  return in;
}

// Shortest decimal form that round-trips the exact double.
std::string fmt_double(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    double back = 0.0;
    std::sscanf(buf, "%lf", &back);
    if (back == v) break;
  }
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

std::string meta_header(const ArtifactMeta& meta) {
  std::ostringstream out;
  out << "# viewrank " << VIEWRANK_VERSION << "\n";
  out << "# command: " << (meta.command.empty() ? "(api)" : meta.command) << "\n";
  out << "# seed: " << meta.seed << "\n";
  return out.str();
}

void write_posts_jsonl(const std::string& path, const Dataset& dataset, const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  for (const auto& user : dataset.users) {
    for (const auto& post : user.posts) {
      nlohmann::json j{{"user_id", post.user_id},
                       {"post_id", post.post_id},
                       {"likes", post.likes},
                       {"comments", post.comments},
                       {"views", post.views}};
      if (post.published_at) j["published_at"] = *post.published_at;
      out << j.dump() << "\n";
    }
  }
}

void write_users_csv(const std::string& path, const Dataset& dataset, const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  out << "user_id,followers\n";
  for (const auto& user : dataset.users) {
    out << user.user_id << "," << user.followers << "\n";
  }
}

void write_edges_csv(const std::string& path, const std::vector<EngagementEdge>& edges,
                     const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  out << "source,target,weight\n";
  for (const auto& e : edges) {
    out << e.source << "," << e.target << "," << e.weight << "\n";
  }
}

void write_ground_truth_csv(const std::string& path, const std::map<std::string, double>& truth,
                            const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  out << "user_id,influence\n";
  for (const auto& [id, influence] : truth) {
    out << id << "," << fmt_double(influence) << "\n";
  }
}

void write_aggregates_csv(const std::string& path, const Dataset& dataset,
                          const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  out << "user_id,followers,post_count_total,posts_retained,influence\n";
  for (const auto& user : dataset.users) {
    out << user.user_id << "," << user.followers << "," << user.post_count_total << ","
        << user.posts.size() << "," << fmt_double(user.influence) << "\n";
  }
}

void write_features_csv(const std::string& path, const Dataset& dataset,
                        const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  out << "user_id";
  for (const char* name : kFeatureNames) out << "," << name;
  out << ",influence\n";
  for (const auto& user : dataset.users) {
    out << user.user_id;
    for (double v : extract_features(user, false).as_array()) out << "," << fmt_double(v);
    out << "," << fmt_double(user.influence) << "\n";
  }
}

FeatureTable read_features_csv(const std::string& path) {
  auto in = open_in(path);
  FeatureTable table;
  std::vector<std::array<double, kNumFeatures>> rows;
  std::vector<double> influences;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      if (fields.empty() || fields[0] != "user_id") {
        throw Error(Errc::malformed_line,
                    "line " + std::to_string(line_no) + ": bad feature CSV header");
      }
      continue;
    }
    if (fields.size() != kNumFeatures + 2) {
      throw Error(Errc::malformed_line,
                  "line " + std::to_string(line_no) + ": wrong number of fields");
    }
    table.user_ids.push_back(fields[0]);
    std::array<double, kNumFeatures> row{};
    try {
      for (int j = 0; j < kNumFeatures; ++j) row[static_cast<std::size_t>(j)] = std::stod(fields[static_cast<std::size_t>(j + 1)]);
      influences.push_back(std::stod(fields[kNumFeatures + 1]));
    } catch (const std::exception&) {
      throw Error(Errc::malformed_line,
                  "line " + std::to_string(line_no) + ": non-numeric field");
    }
    rows.push_back(row);
  }
  table.X_raw.resize(static_cast<Eigen::Index>(rows.size()), kNumFeatures);
  table.influence.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < kNumFeatures; ++j) {
      table.X_raw(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<std::size_t>(j)];
    }
    table.influence(static_cast<Eigen::Index>(i)) = influences[i];
  }
  return table;
}

std::vector<EngagementEdge> read_edges_csv(const std::string& path) {
  auto in = open_in(path);
  std::vector<EngagementEdge> edges;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw Error(Errc::malformed_line,
                  "line " + std::to_string(line_no) + ": expected source,target,weight");
    }
    EngagementEdge e;
    e.source = fields[0];
    e.target = fields[1];
    try {
      e.weight = std::stoll(fields[2]);
    } catch (const std::exception&) {
      throw Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": bad weight");
    }
    if (e.weight < 1) {
      throw Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": weight < 1");
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

std::map<std::string, double> read_influence_csv(const std::string& path) {
  auto in = open_in(path);
  std::map<std::string, double> influences;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split(line, ',');
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    if (fields.size() < 2) {
      throw Error(Errc::malformed_line,
                  "line " + std::to_string(line_no) + ": expected user_id,influence");
    }
    try {
      influences[fields[0]] = std::stod(fields.back());
    } catch (const std::exception&) {
      throw Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": bad influence");
    }
  }
  return influences;
}

Dataset ingest(const std::string& posts_path, PostFormat format, const std::string& users_path,
               int min_posts, double z_threshold) {
  auto posts_in = open_in(posts_path);
  const auto posts = parse_posts(posts_in, format);
  auto users_in = open_in(users_path);
  const auto followers = read_followers_csv(users_in);

  Dataset dataset;
  dataset.provenance = Provenance::ingested;
  for (auto& user : group_and_filter(posts, followers, min_posts)) {
    dataset.users.push_back(remove_outlier_posts(user, z_threshold));
  }
  return dataset;
}

void write_scores_csv(const std::string& path, const std::map<std::string, double>& scores,
                      const ArtifactMeta& meta) {
  auto out = open_out(path);
  out << meta_header(meta);
  out << "user_id,score\n";
  for (const auto& [id, score] : scores) {
    out << id << "," << fmt_double(score) << "\n";
  }
}

void write_ranking_csv(const std::string& path, const std::vector<std::string>& user_ids,
                       const Eigen::VectorXd& predictions, const ArtifactMeta& meta) {
  if (static_cast<Eigen::Index>(user_ids.size()) != predictions.size()) {
    throw Error(Errc::length_mismatch, "ranking ids and predictions differ in length");
  }
  std::vector<std::size_t> order(user_ids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  // descending prediction, ties by ascending user_id
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double pa = predictions(static_cast<Eigen::Index>(a));
    const double pb = predictions(static_cast<Eigen::Index>(b));
    if (pa != pb) return pa > pb;
    return user_ids[a] < user_ids[b];
  });
  auto out = open_out(path);
  out << meta_header(meta);
  out << "rank,user_id,predicted_influence\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    out << (r + 1) << "," << user_ids[order[r]] << ","
        << fmt_double(predictions(static_cast<Eigen::Index>(order[r]))) << "\n";
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  auto out = open_out(path);
  out << content;
}

}  // namespace viewrank
