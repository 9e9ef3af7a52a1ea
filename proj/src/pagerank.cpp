#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "viewrank/error.hpp"
#include "viewrank/evaluation.hpp"

namespace viewrank {

std::map<std::string, double> pagerank(const std::vector<EngagementEdge>& edges, double damping,
                                       double tol, int max_iter) {
  // Node order fixed by sorted user id for run-to-run stability.
  std::map<std::string, int> index;
  for (const auto& e : edges) {
    if (e.source == e.target) continue;
    index.emplace(e.source, 0);
    index.emplace(e.target, 0);
  }
  if (index.empty()) throw Error(Errc::no_edges, "edge list is empty after self-loop removal");
  int next = 0;
  for (auto& [id, idx] : index) idx = next++;
  const int n = next;

  std::vector<double> out_weight(static_cast<std::size_t>(n), 0.0);
  struct Arc {
    int source;
    int target;
    double weight;
  };
  std::vector<Arc> arcs;
  for (const auto& e : edges) {
    if (e.source == e.target) continue;
    if (e.weight < 1) throw Error(Errc::invalid_config, "edge weight must be >= 1");
    const int s = index[e.source];
    const int t = index[e.target];
    arcs.push_back({s, t, static_cast<double>(e.weight)});
    out_weight[static_cast<std::size_t>(s)] += static_cast<double>(e.weight);
  }

  std::vector<double> pr(static_cast<std::size_t>(n), 1.0 / n);
  std::vector<double> nxt(static_cast<std::size_t>(n));
  for (int iter = 0; iter < max_iter; ++iter) {
    double dangling = 0.0;
    for (int v = 0; v < n; ++v) {
      if (out_weight[static_cast<std::size_t>(v)] == 0.0) dangling += pr[static_cast<std::size_t>(v)];
    }
    const double base = (1.0 - damping) / n + damping * dangling / n;
    std::fill(nxt.begin(), nxt.end(), base);
    for (const auto& a : arcs) {
      nxt[static_cast<std::size_t>(a.target)] +=
          damping * pr[static_cast<std::size_t>(a.source)] * a.weight /
          out_weight[static_cast<std::size_t>(a.source)];
    }
    double delta = 0.0;
    for (int v = 0; v < n; ++v) {
      delta += std::abs(nxt[static_cast<std::size_t>(v)] - pr[static_cast<std::size_t>(v)]);
    }
    pr.swap(nxt);
    if (delta < tol) break;
  }

  std::map<std::string, double> scores;
  for (const auto& [id, idx] : index) scores[id] = pr[static_cast<std::size_t>(idx)];
  return scores;
}

double pagerank_rank_correlation(const std::map<std::string, double>& scores,
                                 const std::map<std::string, double>& influences) {
  std::vector<double> a, b;
  for (const auto& [id, score] : scores) {
    auto it = influences.find(id);
    if (it != influences.end()) {
      a.push_back(score);
      b.push_back(it->second);
    }
  }
  if (a.size() < 2) {
    throw Error(Errc::degenerate_ranking, "fewer than 2 users common to both rankings");
  }
  return spearman(Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())),
                  Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
}

}  // namespace viewrank
