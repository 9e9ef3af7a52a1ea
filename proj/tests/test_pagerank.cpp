#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "viewrank/error.hpp"
#include "viewrank/evaluation.hpp"
#include "viewrank/rng.hpp"

using namespace viewrank;

namespace {

EngagementEdge edge(const std::string& s, const std::string& t, long long w = 1) {
  EngagementEdge e;
  e.source = s;
  e.target = t;
  e.weight = w;
  return e;
}

}  // namespace

TEST_CASE("three-node cycle is uniform") {
  const auto scores = pagerank({edge("a", "b"), edge("b", "c"), edge("c", "a")});
  REQUIRE(scores.size() == 3);
  for (const auto& [node, s] : scores) CHECK(s == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("symmetric two-node graph splits evenly") {
  const auto scores = pagerank({edge("a", "b"), edge("b", "a")});
  REQUIRE(scores.size() == 2);
  CHECK(scores.at("a") == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(scores.at("b") == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("scores sum to one and stay non-negative") {
  Rng rng(61);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<EngagementEdge> edges;
    const int n = 5 + static_cast<int>(rng.next_below(20));
    const int m = n + static_cast<int>(rng.next_below(3 * n));
    for (int i = 0; i < m; ++i) {
      const auto s = "n" + std::to_string(rng.next_below(n));
      const auto t = "n" + std::to_string(rng.next_below(n));
      edges.push_back(edge(s, t, 1 + static_cast<long long>(rng.next_below(5))));
    }
    const auto scores = pagerank(edges);
    double total = 0.0;
    for (const auto& [node, s] : scores) {
      CHECK(s >= 0.0);
      total += s;
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("pagerank matches a dense oracle on small weighted graphs") {
  Rng rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_below(6));
    std::vector<std::vector<double>> adjacency(static_cast<std::size_t>(n),
                                               std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<EngagementEdge> edges;
    auto add = [&](std::size_t s, std::size_t t, long long w) {
      adjacency[s][t] += static_cast<double>(w);
      // node names sort in index order so oracle indices line up
      edges.push_back(edge("n" + std::to_string(s), "n" + std::to_string(t), w));
    };
    // a cycle first so every node appears, then random extra edges
    for (int i = 0; i < n; ++i) add(static_cast<std::size_t>(i), static_cast<std::size_t>((i + 1) % n), 1);
    const int m = static_cast<int>(rng.next_below(2 * n));
    for (int i = 0; i < m; ++i) {
      const std::size_t s = rng.next_below(n);
      const std::size_t t = rng.next_below(n);
      if (s == t) continue;  // the library drops self-loops
      add(s, t, 1 + static_cast<long long>(rng.next_below(9)));
    }
    const auto scores = pagerank(edges);
    const auto ref = oracles::pagerank_dense(adjacency, 0.85, 20000);
    REQUIRE(scores.size() == static_cast<std::size_t>(n));
    for (const auto& [node, s] : scores) {
      const std::size_t idx = static_cast<std::size_t>(std::stoi(node.substr(1)));
      CHECK(s == doctest::Approx(ref[idx]).epsilon(1e-6));
    }
  }
}

TEST_CASE("a node cited by more sources outranks the citing leaf") {
  // a -> b, a -> c, b -> c: c collects the most mass, a only the teleport share
  const auto scores = pagerank({edge("a", "b"), edge("a", "c"), edge("b", "c")});
  CHECK(scores.at("c") > scores.at("b"));
  CHECK(scores.at("b") > scores.at("a"));
}

TEST_CASE("edge weights shift mass toward the heavier target") {
  const auto scores = pagerank({edge("a", "b", 9), edge("a", "c", 1),
                                edge("b", "a", 1), edge("c", "a", 1)});
  CHECK(scores.at("b") > scores.at("c"));
}

TEST_CASE("pagerank input validation") {
  try {
    pagerank({});
    FAIL("expected NoEdges");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::no_edges);
  }
  CHECK_THROWS_AS(pagerank({edge("a", "b", 0)}), Error);
  CHECK_THROWS_AS(pagerank({edge("a", "b", -3)}), Error);
}

TEST_CASE("rank correlation hits 1 for proportional scores and near 0 for noise") {
  Rng rng(71);
  std::map<std::string, double> scores, influences, unrelated;
  for (int i = 0; i < 1000; ++i) {
    const std::string id = "u" + std::to_string(i);
    const double v = rng.uniform(1.0, 100.0);
    scores[id] = v;
    influences[id] = 7.5 * v;
    unrelated[id] = rng.uniform(1.0, 100.0);
  }
  CHECK(pagerank_rank_correlation(scores, influences) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(pagerank_rank_correlation(scores, unrelated)) < 0.2);

  // only the shared ids participate
  std::map<std::string, double> partial{{"u0", scores["u0"]}, {"u1", scores["u1"]},
                                        {"u2", scores["u2"]}, {"zz", 1.0}};
  CHECK(pagerank_rank_correlation(partial, influences) == doctest::Approx(1.0).epsilon(1e-9));
}
