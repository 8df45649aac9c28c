#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gridcorr/data_model.hpp"

namespace gridcorr {

enum class Measure { pearson, smoothed_pearson, event_sync, event_sync_original, rmt_filtered, sparse, string };

std::string_view to_string(Measure m);
Measure parse_measure(std::string_view s);

using ParamValue = std::variant<double, std::string>;

/// Symmetric N x N similarity matrix tagged with the measure that produced it.
struct CorrelationMatrix {
  Eigen::MatrixXd values;
  Measure measure = Measure::pearson;
  std::map<std::string, ParamValue> params;
  std::vector<std::string> nodes;

  Index size() const { return values.rows(); }
  double param(const std::string& key) const;  // numeric parameter, throws if absent
};

/// Largest |C_ij - C_ji|.
double asymmetry(const Eigen::MatrixXd& m);

CorrelationMatrix pearson(const PricePanel& panel);

/// Normalised exponential weights, nondecreasing in t.
struct WeightVector {
  Eigen::VectorXd weights;
  std::optional<double> theta;  // set when built by exponential_weights
};

WeightVector exponential_weights(Index length, double theta);
WeightVector uniform_weights(Index length);

CorrelationMatrix weighted_pearson(const PricePanel& panel, const WeightVector& w);
CorrelationMatrix smoothed_pearson(const PricePanel& panel, double theta);

/// Per-series {-1, 0, +1} events obtained by median thresholding of the
/// positive and negative samples separately.
struct TernarySeries {
  std::vector<int> events;
  double mp = 0.0;  // +inf when the series has no positive sample
  double mn = 0.0;  // -inf when the series has no negative sample

  std::size_t event_count() const;
  std::vector<Index> event_times() const;
};

TernarySeries ternary_filter(std::span<const double> series);
TernarySeries ternary_filter(const Eigen::Ref<const Eigen::RowVectorXd>& series);

/// Symmetrised event-count synchronisation Q_tau (event signs ignored).
double event_sync_original(const TernarySeries& a, const TernarySeries& b, int tau);
double event_sync_original(std::span<const Index> a_times, std::span<const Index> b_times, int tau);

enum class EventSyncNormalization { diagonal, row_sum };
enum class EventlessPolicy { error, isolate };

struct EventSyncOptions {
  int tau = 3;
  EventSyncNormalization normalization = EventSyncNormalization::diagonal;
  EventlessPolicy eventless = EventlessPolicy::error;
};

/// Raw synchronisation matrix J_ij = sum_t e_i(t) sum_{|t-t'|<=tau} e_j(t').
Eigen::MatrixXd event_sync_counts(const std::vector<TernarySeries>& series, int tau);

/// Normalised event-synchronisation matrix. params carry "tau",
/// "normalization", "clamped" (entries pulled back into [-1,1]) and
/// "isolated" (eventless nodes under the isolate policy).
CorrelationMatrix event_sync_matrix(const PricePanel& panel, const EventSyncOptions& opts);

/// Matrix of pairwise Q_tau values.
CorrelationMatrix event_sync_original_matrix(const PricePanel& panel, int tau);

/// Normalised p-spectrum string kernel over the raw node names.
double string_kernel(std::string_view s, std::string_view t, int p);
CorrelationMatrix string_correlation(const std::vector<NodeName>& nodes, int p);

}  // namespace gridcorr
