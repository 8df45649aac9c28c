#include "gridcorr/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "gridcorr/error.hpp"
#include "gridcorr/rmt.hpp"

namespace gridcorr {

namespace {

Eigen::VectorXd squared_distances(const Eigen::MatrixXd& points, const Eigen::RowVectorXd& c) {
  return (points.rowwise() - c).rowwise().squaredNorm();
}

KMeansResult lloyd(const Eigen::MatrixXd& points, int k, std::mt19937_64& rng) {
  const Index n = points.rows();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Eigen::MatrixXd centers(k, points.cols());

  // k-means++ seeding.
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centers.row(0) = points.row(pick(rng));
  Eigen::VectorXd best = squared_distances(points, centers.row(0));
  for (int c = 1; c < k; ++c) {
    double total = best.sum();
    Index chosen = 0;
    if (total > 0.0) {
      double u = unit(rng) * total, acc = 0.0;
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        acc += best(i);
        if (acc > u && best(i) > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centers.row(c) = points.row(chosen);
    best = best.cwiseMin(squared_distances(points, centers.row(c)));
  }

  const Eigen::VectorXd point_norms = points.rowwise().squaredNorm();
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  Eigen::VectorXd dist(n);
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::MatrixXd d2 = (-2.0 * points * centers.transpose()).rowwise() +
                         centers.rowwise().squaredNorm().transpose();
    d2.colwise() += point_norms;
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      Index arg = 0;
      dist(i) = d2.row(i).minCoeff(&arg);
      if (labels[static_cast<std::size_t>(i)] != static_cast<int>(arg)) {
        labels[static_cast<std::size_t>(i)] = static_cast<int>(arg);
        changed = true;
      }
    }
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    bool reseeded = false;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
        continue;
      }
      // Empty cluster: move its centre onto the worst-served point.
      Index far = 0;
      dist.maxCoeff(&far);
      centers.row(c) = points.row(far);
      dist(far) = 0.0;
      reseeded = true;
    }
    if (!changed && !reseeded) break;
  }

  KMeansResult r;
  r.labels = std::move(labels);
  r.inertia = 0.0;
  for (Index i = 0; i < n; ++i)
    r.inertia += (points.row(i) - centers.row(r.labels[static_cast<std::size_t>(i)])).squaredNorm();
  return r;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts) {
  require(k >= 1, "cluster count must be >= 1");
  require(k <= points.rows(), "cluster count exceeds the number of points");
  require(restarts >= 1, "k-means needs at least one restart");
  std::mt19937_64 rng(seed);
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    auto cand = lloyd(points, k, rng);
    if (cand.inertia < best.inertia) best = std::move(cand);
  }
  return best;
}

Eigen::MatrixXd normalized_laplacian(const Eigen::MatrixXd& w) {
  Eigen::VectorXd inv_sqrt = w.rowwise().sum().cwiseMax(1e-12).cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd l = -(inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal());
  l.diagonal().array() += 1.0;
  return 0.5 * (l + l.transpose());
}

namespace {

std::vector<Index> twin_classes(const Eigen::MatrixXd& w) {
  const Index n = w.rows();
  std::vector<Index> cls(static_cast<std::size_t>(n), -1);
  auto twins = [&](Index i, Index j) {
    for (Index k = 0; k < n; ++k)
      if (k != i && k != j && w(i, k) != w(j, k)) return false;
    return true;
  };
  for (Index i = 0; i < n; ++i) {
    if (cls[i] >= 0) continue;
    cls[i] = i;
    for (Index j = i + 1; j < n; ++j)
      if (cls[j] < 0 && twins(i, j)) cls[j] = i;
  }
  return cls;
}

}  // namespace

SpectralEmbedding spectral_embedding(const CorrelationMatrix& c) {
  const Index n = c.size();
  require(n >= 1 && c.values.cols() == n, "spectral clustering needs a square matrix");
  if (asymmetry(c.values) > 1e-12) fail(Errc::invalid_argument, "spectral clustering needs a symmetric matrix");
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  if (n >= 2) w = adjacency(threshold_graph(c, defaults::kThresholdQuantile));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normalized_laplacian(w));
  if (es.info() != Eigen::Success) fail(Errc::undefined, "eigen-decomposition did not converge");
  SpectralEmbedding e;
  e.eigenvalues = es.eigenvalues();
  e.eigenvectors = es.eigenvectors();
  e.nodes = c.nodes;
  e.twin_class = twin_classes(w);
  return e;
}

Partition cluster_embedding(const SpectralEmbedding& e, int k, std::uint64_t seed, int restarts) {
  const Index n = e.eigenvectors.rows();
  require(k >= 1, "cluster count must be >= 1");
  if (k > n) fail(Errc::invalid_argument, "cluster count k=" + std::to_string(k) + " exceeds N=" + std::to_string(n));
  Eigen::MatrixXd x = e.eigenvectors.leftCols(k);
  if (static_cast<Index>(e.twin_class.size()) == n) {
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, k);
    Eigen::VectorXd count = Eigen::VectorXd::Zero(n);
    for (Index i = 0; i < n; ++i) {
      sum.row(e.twin_class[i]) += x.row(i);
      count(e.twin_class[i]) += 1.0;
    }
    for (Index i = 0; i < n; ++i) x.row(i) = sum.row(e.twin_class[i]) / count(e.twin_class[i]);
  }
  for (Index i = 0; i < n; ++i) {
    double norm = x.row(i).norm();
    if (norm > 0.0) x.row(i) /= norm;
  }
  auto km = kmeans(x, k, seed, restarts);
  Partition p = make_partition(km.labels, "spectral", seed);
  p.nodes = e.nodes;
  return p;
}

Partition spectral_clustering(const CorrelationMatrix& c, int k, std::uint64_t seed, int restarts) {
  require(k >= 1, "cluster count must be >= 1");
  if (k > c.size())
    fail(Errc::invalid_argument, "cluster count k=" + std::to_string(k) + " exceeds N=" + std::to_string(c.size()));
  return cluster_embedding(spectral_embedding(c), k, seed, restarts);
}

double modularity(const FilteredGraph& g, const Partition& p, ModularityConvention conv) {
  require(static_cast<int>(p.size()) == g.n_vertices, "partition does not cover the graph");
  const auto k = static_cast<std::size_t>(p.k);
  std::vector<double> inside(k, 0.0), total(k, 0.0);
  double two_m = 0.0;
  for (const auto& e : g.edges) {
    require(e.weight >= 0.0, "modularity needs nonnegative weights");
    int a = p.labels[static_cast<std::size_t>(e.i)], b = p.labels[static_cast<std::size_t>(e.j)];
    if (a == b) inside[static_cast<std::size_t>(a)] += 2.0 * e.weight;
    total[static_cast<std::size_t>(a)] += e.weight;
    total[static_cast<std::size_t>(b)] += e.weight;
    two_m += 2.0 * e.weight;
  }
  if (!(two_m > 0.0)) fail(Errc::undefined, "modularity undefined for zero total edge weight");
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) q += inside[c] / two_m - (total[c] / two_m) * (total[c] / two_m);
  return conv == ModularityConvention::paper_1_over_m ? 2.0 * q : q;
}

namespace {

struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
  std::vector<double> degree;                            // includes internal weight of merged nodes
};

// One pass of local moves; returns the community of every node and whether anything moved.
bool local_moves(const LevelGraph& g, double two_m, std::mt19937_64& rng, std::vector<int>& comm) {
  const int n = static_cast<int>(g.adj.size());
  comm.resize(static_cast<std::size_t>(n));
  std::iota(comm.begin(), comm.end(), 0);
  std::vector<double> tot = g.degree;
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> link(static_cast<std::size_t>(n), 0.0);
  std::vector<int> touched;
  bool any = false;
  bool moved = true;
  while (moved) {
    moved = false;
    for (int v : order) {
      auto uv = static_cast<std::size_t>(v);
      int own = comm[uv];
      double kv = g.degree[uv];
      for (auto [w, weight] : g.adj[uv]) {
        int c = comm[static_cast<std::size_t>(w)];
        if (link[static_cast<std::size_t>(c)] == 0.0) touched.push_back(c);
        link[static_cast<std::size_t>(c)] += weight;
      }
      tot[static_cast<std::size_t>(own)] -= kv;
      // Gain of joining c (up to a common factor): link_c - tot_c k_v / 2m.
      double own_gain = link[static_cast<std::size_t>(own)] - tot[static_cast<std::size_t>(own)] * kv / two_m;
      int best = own;
      double best_gain = own_gain;
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int c : touched) {
        double gain = link[static_cast<std::size_t>(c)] - tot[static_cast<std::size_t>(c)] * kv / two_m;
        if (gain > best_gain + 1e-12 * two_m) {
          best_gain = gain;
          best = c;
        }
      }
      tot[static_cast<std::size_t>(best)] += kv;
      if (best != own) {
        comm[uv] = best;
        moved = true;
        any = true;
      }
      for (int c : touched) link[static_cast<std::size_t>(c)] = 0.0;
      link[static_cast<std::size_t>(own)] = 0.0;
      touched.clear();
    }
  }
  return any;
}

}  // namespace

Partition louvain(const FilteredGraph& g, std::uint64_t seed) {
  const int n = g.n_vertices;
  require(n >= 1, "Louvain needs at least one vertex");
  if (g.edges.empty()) fail(Errc::invalid_argument, "Louvain needs at least one edge");
  LevelGraph level;
  level.adj.resize(static_cast<std::size_t>(n));
  level.degree.assign(static_cast<std::size_t>(n), 0.0);
  double two_m = 0.0;
  for (const auto& e : g.edges) {
    require(e.weight >= 0.0 && std::isfinite(e.weight), "Louvain needs finite nonnegative weights");
    require(e.i != e.j, "Louvain input has a self-loop");
    if (e.weight == 0.0) continue;
    level.adj[static_cast<std::size_t>(e.i)].emplace_back(e.j, e.weight);
    level.adj[static_cast<std::size_t>(e.j)].emplace_back(e.i, e.weight);
    level.degree[static_cast<std::size_t>(e.i)] += e.weight;
    level.degree[static_cast<std::size_t>(e.j)] += e.weight;
    two_m += 2.0 * e.weight;
  }
  if (!(two_m > 0.0)) fail(Errc::undefined, "Louvain needs positive total edge weight");

  std::mt19937_64 rng(seed);
  std::vector<int> membership(static_cast<std::size_t>(n));
  std::iota(membership.begin(), membership.end(), 0);
  while (true) {
    std::vector<int> comm;
    if (!local_moves(level, two_m, rng, comm)) break;
    int k = 0;
    auto compacted = make_partition(comm).labels;
    for (int c : compacted) k = std::max(k, c + 1);
    for (auto& m : membership) m = compacted[static_cast<std::size_t>(m)];

    // Aggregate communities into super-nodes.
    LevelGraph next;
    next.adj.resize(static_cast<std::size_t>(k));
    next.degree.assign(static_cast<std::size_t>(k), 0.0);
    std::vector<std::map<int, double>> acc(static_cast<std::size_t>(k));
    for (std::size_t v = 0; v < level.adj.size(); ++v) {
      int cv = compacted[v];
      next.degree[static_cast<std::size_t>(cv)] += level.degree[v];
      for (auto [w, weight] : level.adj[v]) {
        int cw = compacted[static_cast<std::size_t>(w)];
        if (cw != cv) acc[static_cast<std::size_t>(cv)][cw] += weight;
      }
    }
    for (int c = 0; c < k; ++c)
      for (auto [d, weight] : acc[static_cast<std::size_t>(c)]) next.adj[static_cast<std::size_t>(c)].emplace_back(d, weight);
    level = std::move(next);
    if (k == 1) break;
  }
  Partition p = make_partition(membership, "louvain", seed);
  p.nodes = g.nodes;
  return p;
}

Partition mst_louvain(const CorrelationMatrix& c, std::uint64_t seed) {
  auto tree = with_correlation_weights(mst(c), c);
  Partition p = louvain(tree, seed);
  p.method = "mst+louvain";
  return p;
}

int ns_mapping(int n, int n_codes) {
  require(n >= 1 && n_codes >= 1, "cluster counts must be >= 1");
  return std::max(n, n_codes);
}

int distinct_place_codes(const std::vector<NodeName>& nodes) {
  std::set<std::string> places;
  for (const auto& nn : nodes) places.insert(nn.place);
  return static_cast<int>(places.size());
}

Partition location_proxy(const std::vector<NodeName>& nodes, int n, int p, std::uint64_t seed) {
  auto sc = string_correlation(nodes, p);
  int ns = ns_mapping(n, distinct_place_codes(nodes));
  if (ns > sc.size())
    fail(Errc::invalid_argument, "location proxy needs " + std::to_string(ns) + " clusters but N=" +
                                     std::to_string(sc.size()));
  Partition out = spectral_clustering(sc, ns, seed);
  out.method = "location_proxy";
  return out;
}

Partition location_proxy_louvain(const std::vector<NodeName>& nodes, int p, std::uint64_t seed) {
  Partition out = mst_louvain(string_correlation(nodes, p), seed);
  out.method = "location_proxy_louvain";
  return out;
}

}  // namespace gridcorr
