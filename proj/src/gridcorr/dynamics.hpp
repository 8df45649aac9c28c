#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gridcorr/analysis.hpp"

namespace gridcorr {

enum class ClusterMethod { spectral, mst_louvain };

std::string_view to_string(ClusterMethod m);
ClusterMethod parse_cluster_method(std::string_view s);

/// Partition of a matrix by the given method.
Partition cluster_matrix(const CorrelationMatrix& c, ClusterMethod method, int k, std::uint64_t seed);

/// Location proxy matching the method: spectral with the n_s rule, or MST + Louvain.
Partition location_proxy_for(const std::vector<NodeName>& nodes, ClusterMethod method, int k, int gram,
                             std::uint64_t seed);

struct WindowStats {
  double mean = 0.0;        // off-diagonal mean
  double largest_eig = 0.0;
};

WindowStats window_stats(const Eigen::MatrixXd& c);

struct DynamicsConfig {
  std::vector<Measure> measures{Measure::pearson};
  std::vector<ClusterMethod> methods{ClusterMethod::mst_louvain};
  int k = defaults::kSpectralClusters;
  int window_hours = defaults::kWindowHours;
  std::optional<int> benchmark;  // default: last complete window
  int moving_std_window = defaults::kMovingStdWindow;
  MeasureConfig measure;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct WindowTrack {
  Measure measure = Measure::pearson;
  ClusterMethod method = ClusterMethod::mst_louvain;
  std::vector<int> window_index;
  std::vector<double> mean_corr;
  std::vector<double> largest_eig;
  std::vector<double> disparity;  // NaN for windows with fewer than two clusters
  std::vector<double> ari_benchmark;
  std::vector<double> ari_location;
};

struct DynamicsResult {
  std::vector<WindowTrack> tracks;  // measures outer, methods inner
  int benchmark = 0;
  int n_windows = 0;
};

/// Number of complete non-overlapping windows.
int count_windows(Index n_times, int window_hours);

/// Weekly analysis on an already-built analysis panel.
DynamicsResult run_dynamics(const PricePanel& panel, const DynamicsConfig& cfg);

/// Weekly analysis of DA - RT.
DynamicsResult run_dynamics(const PricePanel& da, const PricePanel& rt, const DynamicsConfig& cfg);

/// Trailing-window sample standard deviation; length len - w + 1.
std::vector<double> moving_std(const std::vector<double>& track, int w);

struct TrackSummary {
  double mean = 0.0;
  double max = 0.0;
  int argmax = -1;  // window index of the maximum, -1 when the track has no finite values
};

/// Ignores NaN entries.
TrackSummary summarize(const std::vector<double>& values, const std::vector<int>& window_index);

/// Worker count from GRIDCORR_THREADS, else 1.
int threads_from_env();

}  // namespace gridcorr
