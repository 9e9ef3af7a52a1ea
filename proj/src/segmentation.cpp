#include "viewrank/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "viewrank/error.hpp"
#include "viewrank/rng.hpp"

namespace viewrank {

namespace {

struct LloydResult {
  std::vector<double> centroids;
  double inertia = 0.0;
};

double inertia_of(const std::vector<double>& values, const std::vector<double>& centroids) {
  double total = 0.0;
  for (double v : values) {
    const double c = centroids[static_cast<std::size_t>(assign_cluster(v, centroids))];
    total += (v - c) * (v - c);
  }
  return total;
}

LloydResult lloyd_once(const std::vector<double>& values, int k, Rng& rng) {
  const std::size_t n = values.size();

  // k-means++ seeding
  std::vector<double> centroids;
  centroids.push_back(values[rng.next_below(n)]);
  std::vector<double> dist2(n);
  while (static_cast<int>(centroids.size()) < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (double c : centroids) best = std::min(best, (values[i] - c) * (values[i] - c));
      dist2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double r = rng.next_double() * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += dist2[i];
        if (acc >= r) {
          pick = i;
          break;
        }
        pick = i;
      }
    } else {
      pick = rng.next_below(n);
    }
    centroids.push_back(values[pick]);
  }

  std::vector<int> assignment(n, -1);
  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const int a = assign_cluster(values[i], centroids);
      if (a != assignment[i]) {
        assignment[i] = a;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    std::vector<double> sums(static_cast<std::size_t>(k), 0.0);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[static_cast<std::size_t>(assignment[i])] += values[i];
      ++counts[static_cast<std::size_t>(assignment[i])];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centroids[static_cast<std::size_t>(c)] =
            sums[static_cast<std::size_t>(c)] / counts[static_cast<std::size_t>(c)];
      } else {
        // empty cluster: reseed to the point farthest from its assigned centroid
        std::size_t farthest = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = std::abs(values[i] - centroids[static_cast<std::size_t>(assignment[i])]);
          if (d > best) {
            best = d;
            farthest = i;
          }
        }
        centroids[static_cast<std::size_t>(c)] = values[farthest];
      }
    }

    const double cur = inertia_of(values, centroids);
    // Lloyd never increases inertia; tolerate rounding noise only.
    if (cur > prev_inertia + 1e-9 * (1.0 + prev_inertia)) break;
    prev_inertia = cur;
  }

  LloydResult result;
  result.centroids = centroids;
  result.inertia = inertia_of(values, centroids);
  return result;
}

// Polish a Lloyd solution. In one dimension the optimal clusters are
// contiguous runs of the sorted values, so coordinate descent over the run
// boundaries (exhaustive scan per boundary) escapes the boundary-local optima
// Lloyd can converge to; for k = 2 a single scan is globally optimal.
LloydResult refine_contiguous(const std::vector<double>& sorted_values, int k,
                              const LloydResult& start) {
  const int n = static_cast<int>(sorted_values.size());
  std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> prefix_sq(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    prefix[static_cast<std::size_t>(i) + 1] = prefix[static_cast<std::size_t>(i)] + sorted_values[static_cast<std::size_t>(i)];
    prefix_sq[static_cast<std::size_t>(i) + 1] =
        prefix_sq[static_cast<std::size_t>(i)] +
        sorted_values[static_cast<std::size_t>(i)] * sorted_values[static_cast<std::size_t>(i)];
  }
  auto cost = [&](int lo, int hi) {  // [lo, hi)
    const double s = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
    const double q = prefix_sq[static_cast<std::size_t>(hi)] - prefix_sq[static_cast<std::size_t>(lo)];
    return std::max(0.0, q - s * s / (hi - lo));
  };

  // boundaries[c] = first index of run c+1; runs from the Lloyd assignment
  std::vector<int> bounds(static_cast<std::size_t>(k) + 1, 0);
  bounds[static_cast<std::size_t>(k)] = n;
  {
    std::vector<double> sorted_centroids = start.centroids;
    std::sort(sorted_centroids.begin(), sorted_centroids.end());
    int i = 0;
    for (int c = 1; c < k; ++c) {
      while (i < n && assign_cluster(sorted_values[static_cast<std::size_t>(i)], sorted_centroids) < c) ++i;
      bounds[static_cast<std::size_t>(c)] = i;
    }
    // make every run non-empty before descending
    for (int c = 1; c < k; ++c) {
      bounds[static_cast<std::size_t>(c)] =
          std::max(bounds[static_cast<std::size_t>(c)], c);
      bounds[static_cast<std::size_t>(c)] =
          std::min(bounds[static_cast<std::size_t>(c)], n - (k - c));
    }
  }

  bool improved = true;
  while (improved) {
    improved = false;
    for (int c = 1; c < k; ++c) {
      const int lo = bounds[static_cast<std::size_t>(c) - 1];
      const int hi = bounds[static_cast<std::size_t>(c) + 1];
      int best = bounds[static_cast<std::size_t>(c)];
      double best_cost = cost(lo, best) + cost(best, hi);
      for (int p = lo + 1; p < hi; ++p) {
        const double candidate = cost(lo, p) + cost(p, hi);
        if (candidate + 1e-12 < best_cost) {
          best_cost = candidate;
          best = p;
        }
      }
      if (best != bounds[static_cast<std::size_t>(c)]) {
        bounds[static_cast<std::size_t>(c)] = best;
        improved = true;
      }
    }
  }

  LloydResult result;
  result.inertia = 0.0;
  for (int c = 0; c < k; ++c) {
    const int lo = bounds[static_cast<std::size_t>(c)];
    const int hi = bounds[static_cast<std::size_t>(c) + 1];
    result.centroids.push_back((prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)]) /
                               (hi - lo));
    result.inertia += cost(lo, hi);
  }
  return result.inertia < start.inertia ? result : start;
}

}  // namespace

int assign_cluster(double value, const std::vector<double>& centroids) {
  if (centroids.empty()) throw Error(Errc::invalid_config, "no centroids");
  int best = 0;
  double best_dist = std::abs(value - centroids[0]);
  for (std::size_t i = 1; i < centroids.size(); ++i) {
    const double d = std::abs(value - centroids[i]);
    if (d < best_dist) {  // ties keep the lower index
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

KMeans1D fit_kmeans_1d(const std::vector<double>& values, int k, int restarts,
                       std::uint64_t seed) {
  if (k < 1) throw Error(Errc::invalid_config, "k must be >= 1");
  const std::set<double> distinct(values.begin(), values.end());
  if (static_cast<int>(distinct.size()) < k) {
    throw Error(Errc::too_few_distinct_values,
                std::to_string(distinct.size()) + " distinct values for k = " + std::to_string(k));
  }

  std::vector<double> sorted_values = values;
  std::sort(sorted_values.begin(), sorted_values.end());

  LloydResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    LloydResult cur = refine_contiguous(sorted_values, k, lloyd_once(values, k, rng));
    if (cur.inertia < best.inertia) best = std::move(cur);
  }

  std::sort(best.centroids.begin(), best.centroids.end());
  for (std::size_t i = 1; i < best.centroids.size(); ++i) {
    if (best.centroids[i] == best.centroids[i - 1]) {
      throw Error(Errc::centroid_collapse, "duplicate centroids after convergence");
    }
  }

  KMeans1D model;
  model.centroids = std::move(best.centroids);
  model.inertia = best.inertia;
  model.k = k;
  model.restarts = restarts;
  model.seed = seed;
  return model;
}

MultiRegressionModel fit_multi(const Eigen::MatrixXd& X_full, const Eigen::VectorXd& y,
                               const std::vector<double>& followers_raw, int k,
                               const BaseModelSpec& base, std::uint64_t seed, int threads) {
  if (static_cast<Eigen::Index>(followers_raw.size()) != X_full.rows() ||
      X_full.rows() != y.size()) {
    throw Error(Errc::length_mismatch, "X, y and followers_raw must agree in length");
  }

  std::vector<double> scaled(followers_raw.size());
  std::transform(followers_raw.begin(), followers_raw.end(), scaled.begin(),
                 [](double v) { return log_scale(v); });

  MultiRegressionModel model;
  model.kmeans = fit_kmeans_1d(scaled, k, 10, seed);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    members[static_cast<std::size_t>(assign_cluster(scaled[i], model.kmeans.centroids))]
        .push_back(static_cast<int>(i));
  }

  const int d = base.active_features.empty() ? static_cast<int>(X_full.cols())
                                             : static_cast<int>(base.active_features.size());
  const std::size_t min_rows = static_cast<std::size_t>(
      std::max(d + 2, base.kind == ModelKind::forest ? 2 * base.hyper.forest.min_samples_leaf
                                                     : 0));
  for (int c = 0; c < k; ++c) {
    if (members[static_cast<std::size_t>(c)].size() < min_rows) {
      throw Error(Errc::cluster_too_small,
                  "cluster " + std::to_string(c) + " has " +
                      std::to_string(members[static_cast<std::size_t>(c)].size()) + " rows, needs " +
                      std::to_string(min_rows));
    }
  }

  std::vector<int> active = base.active_features;
  if (active.empty()) {
    for (int j = 0; j < static_cast<int>(X_full.cols()); ++j) active.push_back(j);
  }

  for (int c = 0; c < k; ++c) {
    const auto& rows = members[static_cast<std::size_t>(c)];
    Eigen::MatrixXd Xc(static_cast<Eigen::Index>(rows.size()), X_full.cols());
    Eigen::VectorXd yc(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Xc.row(static_cast<Eigen::Index>(i)) = X_full.row(rows[i]);
      yc(static_cast<Eigen::Index>(i)) = y(rows[i]);
    }
    if (base.kind == ModelKind::ridge) {
      model.cluster_models.emplace_back(train_ridge(Xc, yc, base.hyper.alpha, active));
    } else {
      model.cluster_models.emplace_back(fit_forest(Xc, yc, base.hyper.forest, active, threads));
    }
  }
  return model;
}

Eigen::VectorXd predict_multi(const MultiRegressionModel& model, const Eigen::MatrixXd& X_full,
                              const std::vector<double>& followers_raw) {
  if (static_cast<Eigen::Index>(followers_raw.size()) != X_full.rows()) {
    throw Error(Errc::dimension_mismatch, "X rows != followers_raw length");
  }
  Eigen::VectorXd out(X_full.rows());
  for (Eigen::Index i = 0; i < X_full.rows(); ++i) {
    const int c = assign_cluster(log_scale(followers_raw[static_cast<std::size_t>(i)]),
                                 model.kmeans.centroids);
    const Eigen::MatrixXd row = X_full.row(i);
    const auto& cm = model.cluster_models[static_cast<std::size_t>(c)];
    if (std::holds_alternative<LinearModel>(cm)) {
      out(i) = predict_linear(std::get<LinearModel>(cm), row)(0);
    } else {
      out(i) = predict_forest(std::get<ForestModel>(cm), row)(0);
    }
  }
  return out;
}

}  // namespace viewrank
