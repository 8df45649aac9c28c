#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gridcorr/correlation.hpp"
#include "gridcorr/defaults.hpp"

namespace gridcorr {

enum class GraphKind { threshold, mst, pmfg };

std::string_view to_string(GraphKind k);
GraphKind parse_graph_kind(std::string_view s);

struct WeightedEdge {
  int i = 0;  // i < j
  int j = 0;
  double weight = 0.0;

  bool operator==(const WeightedEdge&) const = default;
};

/// Sparse graph over the nodes of a correlation matrix. MST weights are
/// distances, PMFG weights are the (clamped) correlations, threshold weights
/// are max(C_ij, 0).
struct FilteredGraph {
  int n_vertices = 0;
  std::vector<WeightedEdge> edges;
  GraphKind kind = GraphKind::mst;
  Measure source_measure = Measure::pearson;
  std::vector<std::string> nodes;

  double total_weight() const;
};

struct DistanceMatrix {
  Eigen::MatrixXd values;
  long long clamped = 0;  // off-diagonal entries pulled back into [-1, 1]
};

/// d_ij = sqrt(2 (1 - C_ij)) after clamping C into [-1, 1].
DistanceMatrix corr_to_distance(const CorrelationMatrix& c);

/// Kruskal minimum spanning tree; equal distances are taken in lexicographic (i, j) order.
FilteredGraph mst(const Eigen::MatrixXd& d);
FilteredGraph mst(const CorrelationMatrix& c);

/// Greedy planar filtering in descending correlation order (same order as the MST).
FilteredGraph pmfg(const CorrelationMatrix& c, int cap = defaults::kPmfgCap);

/// Type-7 (linear interpolation) sample quantile.
double sample_quantile(std::vector<double> values, double q);

/// Edges with C_ij at or above the q-quantile of the off-diagonal entries.
FilteredGraph threshold_graph(const CorrelationMatrix& c, double quantile);

/// Same edge set with weights max(C_ij, 0).
FilteredGraph with_correlation_weights(const FilteredGraph& g, const CorrelationMatrix& c);

/// Dense symmetric adjacency matrix of the edge weights.
Eigen::MatrixXd adjacency(const FilteredGraph& g);

}  // namespace gridcorr
