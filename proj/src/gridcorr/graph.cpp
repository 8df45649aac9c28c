#include "gridcorr/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gridcorr/error.hpp"
#include "gridcorr/planarity.hpp"

namespace gridcorr {

std::string_view to_string(GraphKind k) {
  switch (k) {
    case GraphKind::threshold: return "threshold";
    case GraphKind::mst: return "mst";
    case GraphKind::pmfg: return "pmfg";
  }
  return "unknown";
}

GraphKind parse_graph_kind(std::string_view s) {
  if (s == "threshold") return GraphKind::threshold;
  if (s == "mst") return GraphKind::mst;
  if (s == "pmfg") return GraphKind::pmfg;
  fail(Errc::invalid_argument, "unknown graph kind '" + std::string(s) + "'");
}

double FilteredGraph::total_weight() const {
  double s = 0.0;
  for (const auto& e : edges) s += e.weight;
  return s;
}

DistanceMatrix corr_to_distance(const CorrelationMatrix& c) {
  const Index n = c.size();
  require(c.values.cols() == n, "correlation matrix must be square");
  DistanceMatrix d;
  d.values = Eigen::MatrixXd::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      double v = c.values(i, j);
      if (!std::isfinite(v)) fail(Errc::invalid_argument, "correlation matrix has non-finite entries");
      if (v > 1.0 || v < -1.0) {
        v = std::clamp(v, -1.0, 1.0);
        if (i < j) ++d.clamped;
      }
      d.values(i, j) = std::sqrt(2.0 * (1.0 - v));
    }
  return d;
}

namespace {

struct Candidate {
  double key;
  int i, j;
};

// Upper-triangle pairs ordered by ascending key, then (i, j).
std::vector<Candidate> ordered_pairs(const Eigen::MatrixXd& d) {
  const int n = static_cast<int>(d.rows());
  std::vector<Candidate> out;
  out.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.push_back({d(i, j), i, j});
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.key != b.key) return a.key < b.key;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  return out;
}

int find_root(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    v = parent[static_cast<std::size_t>(v)];
  }
  return v;
}

void sort_edges(std::vector<WeightedEdge>& edges) {
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
}

}  // namespace

FilteredGraph mst(const Eigen::MatrixXd& d) {
  const Index n = d.rows();
  require(n >= 2 && d.cols() == n, "MST needs a square distance matrix with N >= 2");
  if (!d.allFinite()) fail(Errc::invalid_argument, "distance matrix has non-finite entries");
  require(asymmetry(d) <= 1e-12, "distance matrix must be symmetric");
  require(d.minCoeff() >= 0.0, "distances must be nonnegative");

  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  FilteredGraph g;
  g.n_vertices = static_cast<int>(n);
  g.kind = GraphKind::mst;
  for (const auto& cand : ordered_pairs(d)) {
    int a = find_root(parent, cand.i), b = find_root(parent, cand.j);
    if (a == b) continue;
    parent[static_cast<std::size_t>(a)] = b;
    g.edges.push_back({cand.i, cand.j, cand.key});
    if (static_cast<Index>(g.edges.size()) == n - 1) break;
  }
  sort_edges(g.edges);
  return g;
}

FilteredGraph mst(const CorrelationMatrix& c) {
  auto g = mst(corr_to_distance(c).values);
  g.source_measure = c.measure;
  g.nodes = c.nodes;
  return g;
}

FilteredGraph pmfg(const CorrelationMatrix& c, int cap) {
  const Index n = c.size();
  require(n >= 3, "PMFG needs N >= 3");
  if (n > cap)
    fail(Errc::capacity, "PMFG refused for N=" + std::to_string(n) + " above the cap of " + std::to_string(cap) +
                             ": each of the O(N^2) candidate edges needs a planarity test");
  auto d = corr_to_distance(c);
  const std::size_t target = 3 * static_cast<std::size_t>(n - 2);

  IncrementalPlanarGraph planar(static_cast<int>(n));
  FilteredGraph g;
  g.n_vertices = static_cast<int>(n);
  g.kind = GraphKind::pmfg;
  g.source_measure = c.measure;
  g.nodes = c.nodes;
  for (const auto& cand : ordered_pairs(d.values)) {
    if (!planar.try_add_edge(cand.i, cand.j)) continue;
    g.edges.push_back({cand.i, cand.j, std::clamp(c.values(cand.i, cand.j), -1.0, 1.0)});
    if (g.edges.size() == target) break;
  }
  sort_edges(g.edges);
  return g;
}

double sample_quantile(std::vector<double> values, double q) {
  require(!values.empty(), "quantile of an empty sample");
  require(q >= 0.0 && q <= 1.0, "quantile must lie in [0, 1]");
  std::sort(values.begin(), values.end());
  double h = (static_cast<double>(values.size()) - 1.0) * q;
  auto lo = static_cast<std::size_t>(std::floor(h));
  std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

FilteredGraph threshold_graph(const CorrelationMatrix& c, double quantile) {
  const Index n = c.size();
  require(n >= 2 && c.values.cols() == n, "threshold graph needs a square matrix with N >= 2");
  require(quantile >= 0.0 && quantile <= 1.0, "quantile must lie in [0, 1]");
  std::vector<double> off;
  off.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) off.push_back(c.values(i, j));
  double cut = sample_quantile(off, quantile);
  FilteredGraph g;
  g.n_vertices = static_cast<int>(n);
  g.kind = GraphKind::threshold;
  g.source_measure = c.measure;
  g.nodes = c.nodes;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (c.values(i, j) >= cut)
        g.edges.push_back({static_cast<int>(i), static_cast<int>(j), std::max(c.values(i, j), 0.0)});
  return g;
}

FilteredGraph with_correlation_weights(const FilteredGraph& g, const CorrelationMatrix& c) {
  require(c.size() == g.n_vertices, "graph and matrix sizes differ");
  FilteredGraph out = g;
  for (auto& e : out.edges) e.weight = std::max(c.values(e.i, e.j), 0.0);
  return out;
}

Eigen::MatrixXd adjacency(const FilteredGraph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.n_vertices, g.n_vertices);
  for (const auto& e : g.edges) a(e.i, e.j) = a(e.j, e.i) = e.weight;
  return a;
}

}  // namespace gridcorr
