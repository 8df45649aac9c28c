#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "gridcorr/graph.hpp"
#include "gridcorr/planarity.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace gridcorr;
using doctest::Approx;

namespace {

CorrelationMatrix corr(const Eigen::MatrixXd& v) {
  CorrelationMatrix c;
  c.values = v;
  for (Index i = 0; i < v.rows(); ++i) c.nodes.push_back("N" + std::to_string(i));
  return c;
}

std::vector<EdgePair> complete(int n) {
  std::vector<EdgePair> e;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.push_back({i, j});
  return e;
}

std::set<std::pair<int, int>> edge_set(const FilteredGraph& g) {
  std::set<std::pair<int, int>> s;
  for (const auto& e : g.edges) s.insert({e.i, e.j});
  return s;
}

}  // namespace

TEST_CASE("planarity of classic graphs") {
  CHECK(is_planar(4, complete(4)));
  CHECK_FALSE(is_planar(5, complete(5)));
  auto k5e = complete(5);
  k5e.pop_back();
  CHECK(is_planar(5, k5e));
  std::vector<EdgePair> k33;
  for (int a = 0; a < 3; ++a)
    for (int b = 3; b < 6; ++b) k33.push_back({a, b});
  CHECK_FALSE(is_planar(6, k33));
  // Petersen graph
  std::vector<EdgePair> pet{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 5}, {1, 6}, {2, 7},
                            {3, 8}, {4, 9}, {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
  CHECK_FALSE(is_planar(10, pet));
  // Subdivided K5: still non-planar.
  std::vector<EdgePair> sub;
  int next = 5;
  for (auto [u, v] : complete(5)) {
    sub.push_back({u, next});
    sub.push_back({next, v});
    ++next;
  }
  CHECK_FALSE(is_planar(next, sub));
  // Grid graphs are planar.
  std::vector<EdgePair> grid;
  for (int r = 0; r < 5; ++r)
    for (int c = 0; c < 5; ++c) {
      if (c < 4) grid.push_back({5 * r + c, 5 * r + c + 1});
      if (r < 4) grid.push_back({5 * r + c, 5 * r + c + 5});
    }
  CHECK(is_planar(25, grid));
}

TEST_CASE("planarity agrees with Boyer-Myrvold on random graphs") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  int planar = 0, nonplanar = 0;
  for (int trial = 0; trial < 400; ++trial) {
    int n = 5 + trial % 12;
    double p = 0.15 + 0.5 * u(rng);
    std::vector<EdgePair> e;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (u(rng) < p) e.push_back({i, j});
    bool want = oracle::boost_is_planar(n, e);
    CHECK(is_planar(n, e) == want);
    (want ? planar : nonplanar)++;
  }
  CHECK(planar > 50);
  CHECK(nonplanar > 50);
}

TEST_CASE("biconnected blocks partition the edges") {
  // Two triangles sharing vertex 2, plus a pendant edge.
  std::vector<EdgePair> e{{0, 1}, {1, 2}, {0, 2}, {2, 3}, {3, 4}, {2, 4}, {4, 5}};
  auto blocks = biconnected_blocks(6, e);
  CHECK(blocks.size() == 3);
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.size();
  CHECK(total == e.size());
}

TEST_CASE("incremental planar graph refuses the edge that breaks planarity") {
  IncrementalPlanarGraph g(5);
  auto all = complete(5);
  int added = 0;
  for (auto [u, v] : all) added += g.try_add_edge(u, v);
  CHECK(added == 9);
  CHECK_FALSE(g.try_add_edge(0, 1));
  CHECK(oracle::boost_is_planar(5, g.edges()));
}

TEST_CASE("correlation to distance") {
  Eigen::MatrixXd v(3, 3);
  v << 1, -1, 0.5, -1, 1, 1.0000001, 0.5, 1.0000001, 1;
  auto d = corr_to_distance(corr(v));
  CHECK(d.values(0, 0) == 0.0);
  CHECK(d.values(0, 1) == 2.0);
  CHECK(d.values(0, 2) == Approx(1.0).epsilon(1e-15));
  CHECK(d.values(1, 2) == 0.0);
  CHECK(d.clamped == 1);
}

TEST_CASE("MST examples") {
  Eigen::MatrixXd v(3, 3);
  v << 1, 0.9, 0.5, 0.9, 1, 0.1, 0.5, 0.1, 1;
  auto t = mst(corr(v));
  CHECK(edge_set(t) == std::set<std::pair<int, int>>{{0, 1}, {0, 2}});
  CHECK(t.kind == GraphKind::mst);
  CHECK(t.edges[0].weight == Approx(std::sqrt(0.2)).epsilon(1e-14));

  Eigen::MatrixXd two(2, 2);
  two << 1, 0.3, 0.3, 1;
  CHECK(mst(corr(two)).edges.size() == 1);

  Eigen::MatrixXd eq = Eigen::MatrixXd::Constant(4, 4, 1.0);
  eq.diagonal().setZero();
  CHECK(edge_set(mst(eq)) == std::set<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}});
}

TEST_CASE("MST weight matches the exhaustive minimum") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + trial % 6;
    auto c = corr(oracle::random_correlation(n, rng, n + 2));
    auto d = corr_to_distance(c);
    auto t = mst(d.values);
    CHECK(static_cast<int>(t.edges.size()) == n - 1);
    CHECK(t.total_weight() == Approx(oracle::exhaustive_mst_weight(d.values)).epsilon(1e-12));
  }
}

TEST_CASE("PMFG size, planarity and MST containment") {
  std::mt19937_64 rng(20);
  CHECK(pmfg(corr(oracle::random_correlation(4, rng))).edges.size() == 6);

  Eigen::MatrixXd eq = Eigen::MatrixXd::Constant(5, 5, 0.5);
  eq.diagonal().setOnes();
  auto g5 = pmfg(corr(eq));
  CHECK(g5.edges.size() == 9);
  std::vector<EdgePair> el;
  for (const auto& e : g5.edges) el.push_back({e.i, e.j});
  CHECK(oracle::boost_is_planar(5, el));
  CHECK(g5.edges[0].weight == 0.5);

  for (int n : {6, 10, 20, 35}) {
    auto c = corr(oracle::random_correlation(n, rng));
    auto g = pmfg(c);
    CHECK(static_cast<int>(g.edges.size()) == 3 * (n - 2));
    std::vector<EdgePair> edges;
    for (const auto& e : g.edges) edges.push_back({e.i, e.j});
    CHECK(oracle::boost_is_planar(n, edges));
    auto es = edge_set(g);
    for (const auto& e : mst(c).edges) CHECK(es.count({e.i, e.j}) == 1);
  }
  CHECK(capture_error([] { pmfg(corr(Eigen::MatrixXd::Identity(10, 10)), 5); }) == Errc::capacity);
}

TEST_CASE("threshold graph") {
  Eigen::MatrixXd v(4, 4);
  v << 1, 0.1, 0.2, 0.3, 0.1, 1, 0.4, 0.5, 0.2, 0.4, 1, 0.6, 0.3, 0.5, 0.6, 1;
  auto c = corr(v);
  CHECK(threshold_graph(c, 0.0).edges.size() == 6);
  auto top = threshold_graph(c, 1.0);
  CHECK(edge_set(top) == std::set<std::pair<int, int>>{{2, 3}});
  auto med = threshold_graph(c, 0.5);
  CHECK(med.edges.size() == 3);
  CHECK(sample_quantile({0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, 0.5) == Approx(0.35).epsilon(1e-15));
  CHECK(sample_quantile({1, 2, 3, 4, 5}, 0.25) == 2.0);
}

TEST_CASE("correlation weights and adjacency") {
  Eigen::MatrixXd v(3, 3);
  v << 1, 0.9, -0.5, 0.9, 1, 0.1, -0.5, 0.1, 1;
  auto c = corr(v);
  auto t = mst(c);
  auto w = with_correlation_weights(t, c);
  CHECK(edge_set(w) == edge_set(t));
  for (const auto& e : w.edges) CHECK(e.weight == std::max(v(e.i, e.j), 0.0));
  auto a = adjacency(w);
  CHECK(a(0, 1) == 0.9);
  CHECK(a(1, 0) == 0.9);
  CHECK(a(0, 0) == 0.0);
}

TEST_CASE("graph kind names round-trip") {
  for (auto k : {GraphKind::threshold, GraphKind::mst, GraphKind::pmfg}) CHECK(parse_graph_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_graph_kind("knn"), Error);
}
