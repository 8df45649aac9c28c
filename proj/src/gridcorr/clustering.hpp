#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gridcorr/correlation.hpp"
#include "gridcorr/defaults.hpp"
#include "gridcorr/graph.hpp"
#include "gridcorr/metrics.hpp"

namespace gridcorr {

struct KMeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

/// Lloyd k-means with k-means++ seeding; the best of `restarts` runs by inertia.
/// Clusters that empty out are reseeded from the point farthest from its centroid.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int restarts = defaults::kKmeansRestarts);

/// Eigenvectors of the normalised Laplacian of the median-threshold affinity,
/// ascending eigenvalue order; reusable across cluster counts.
struct SpectralEmbedding {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;  // N x N, column m = m-th smallest
  std::vector<std::string> nodes;
  // Nodes whose affinity rows are interchangeable share a class; their
  // embedding rows are averaged so degenerate eigenspaces cannot split them.
  std::vector<Index> twin_class;
};

/// L = I - D^{-1/2} W D^{-1/2}, degrees floored at 1e-12.
Eigen::MatrixXd normalized_laplacian(const Eigen::MatrixXd& w);

SpectralEmbedding spectral_embedding(const CorrelationMatrix& c);
Partition cluster_embedding(const SpectralEmbedding& e, int k, std::uint64_t seed,
                            int restarts = defaults::kKmeansRestarts);
Partition spectral_clustering(const CorrelationMatrix& c, int k, std::uint64_t seed,
                              int restarts = defaults::kKmeansRestarts);

enum class ModularityConvention { standard, paper_1_over_m };

/// (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j); the other convention doubles it.
double modularity(const FilteredGraph& g, const Partition& p,
                  ModularityConvention conv = ModularityConvention::standard);

/// Multi-level greedy modularity maximisation.
Partition louvain(const FilteredGraph& g, std::uint64_t seed);

/// MST of the matrix, weights max(C_ij, 0), then Louvain.
Partition mst_louvain(const CorrelationMatrix& c, std::uint64_t seed);

/// max(n, n_codes).
int ns_mapping(int n, int n_codes);

/// Number of distinct place prefixes among the node names.
int distinct_place_codes(const std::vector<NodeName>& nodes);

Partition location_proxy(const std::vector<NodeName>& nodes, int n, int p, std::uint64_t seed);

/// Location proxy built by MST + Louvain over the string correlation.
Partition location_proxy_louvain(const std::vector<NodeName>& nodes, int p, std::uint64_t seed);

}  // namespace gridcorr
