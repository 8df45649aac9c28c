#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace gridcorr {

using EdgePair = std::pair<int, int>;

/// Planarity of a simple undirected graph on vertices [0, n). Each biconnected
/// block is embedded face by face (Demoucron-Malgrange-Pertuiset path
/// addition); a fragment with no admissible face proves non-planarity.
bool is_planar(int n, std::span<const EdgePair> edges);

/// Edge lists of the biconnected blocks (bridges form single-edge blocks).
std::vector<std::vector<EdgePair>> biconnected_blocks(int n, std::span<const EdgePair> edges);

/// Graph that only ever accepts edges keeping it planar.
class IncrementalPlanarGraph {
 public:
  explicit IncrementalPlanarGraph(int n);

  /// Adds {u, v} if the result is planar. Returns whether it was added.
  bool try_add_edge(int u, int v);

  int n_vertices() const { return n_; }
  const std::vector<EdgePair>& edges() const { return edges_; }

 private:
  int find(int v);

  int n_;
  std::vector<EdgePair> edges_;
  std::vector<int> parent_;  // union-find over connected components
};

}  // namespace gridcorr
