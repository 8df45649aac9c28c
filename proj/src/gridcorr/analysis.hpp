#pragma once

#include <cstdint>
#include <vector>

#include "gridcorr/clustering.hpp"
#include "gridcorr/correlation.hpp"
#include "gridcorr/defaults.hpp"
#include "gridcorr/sparse.hpp"

namespace gridcorr {

/// Parameters for every measure; each measure reads only its own fields.
struct MeasureConfig {
  double theta = defaults::kSmoothingTheta;
  EventSyncOptions event_sync;
  SparseConfig sparse;
  int gram = defaults::kStringGram;
};

/// Builds the named measure from a panel. rmt_filtered and sparse start from Pearson.
CorrelationMatrix compute_measure(const PricePanel& panel, Measure m, const MeasureConfig& cfg);

struct TuningPoint {
  int n = 0;
  Measure measure = Measure::pearson;
  double ari = 0.0;        // spectral partition vs location proxy at the same n
  double disparity = 0.0;  // NaN when fewer than two clusters remain
};

/// ARI and disparity of spectral partitions for n in [n_min, n_max], per measure.
std::vector<TuningPoint> tune_clusters(const PricePanel& panel, const std::vector<Measure>& measures, int n_min,
                                       int n_max, std::uint64_t seed, const MeasureConfig& cfg);

}  // namespace gridcorr
