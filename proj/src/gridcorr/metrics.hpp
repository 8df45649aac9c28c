#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace gridcorr {

/// Cluster assignment with contiguous 0-based labels in first-appearance order.
struct Partition {
  std::vector<int> labels;
  int k = 0;  // number of non-empty clusters
  std::string method;
  std::uint64_t seed = 0;
  std::vector<std::string> nodes;  // optional, same length as labels when set

  std::size_t size() const { return labels.size(); }
  std::vector<long long> cluster_sizes() const;
};

/// Relabels arbitrary nonnegative ids to 0..k-1 by first appearance.
Partition make_partition(std::span<const int> raw_labels, std::string method = "", std::uint64_t seed = 0);

struct ContingencyTable {
  std::vector<std::vector<long long>> counts;  // rows: clusters of the first partition
  std::vector<long long> row_sums;
  std::vector<long long> col_sums;
  long long total = 0;
};

ContingencyTable contingency(std::span<const int> y, std::span<const int> yp);
ContingencyTable contingency(const Partition& y, const Partition& yp);

/// Fraction of unordered pairs on which the partitions agree.
double rand_index(std::span<const int> y, std::span<const int> yp);
double rand_index(const Partition& y, const Partition& yp);

/// Hubert-Arabie adjusted Rand index. When the expected-index correction
/// leaves a zero denominator (both partitions trivial), returns 1 for equal
/// partitions and 0 otherwise.
double adjusted_rand_index(std::span<const int> y, std::span<const int> yp);
double adjusted_rand_index(const Partition& y, const Partition& yp);

/// Sample standard deviation of cluster sizes over their mean; needs k >= 2.
double disparity(std::span<const long long> sizes);
double disparity(const Partition& p);

/// Per-node flag: the node's reference cluster differs from the reference
/// cluster most represented in its own cluster (ties go to the lower label).
std::vector<bool> misclassified(const Partition& p, const Partition& reference);

}  // namespace gridcorr
