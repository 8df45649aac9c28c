#include "gridcorr/analysis.hpp"

#include <limits>

#include "gridcorr/error.hpp"
#include "gridcorr/rmt.hpp"

namespace gridcorr {

CorrelationMatrix compute_measure(const PricePanel& panel, Measure m, const MeasureConfig& cfg) {
  switch (m) {
    case Measure::pearson: return pearson(panel);
    case Measure::smoothed_pearson: return smoothed_pearson(panel, cfg.theta);
    case Measure::event_sync: return event_sync_matrix(panel, cfg.event_sync);
    case Measure::event_sync_original: return event_sync_original_matrix(panel, cfg.event_sync.tau);
    case Measure::rmt_filtered: return rmt_filtered(pearson(panel), panel.n_times());
    case Measure::sparse: return sparse_correlation(pearson(panel), cfg.sparse).matrix;
    case Measure::string: return string_correlation(panel.nodes(), cfg.gram);
  }
  fail(Errc::invalid_argument, "unknown measure");
}

std::vector<TuningPoint> tune_clusters(const PricePanel& panel, const std::vector<Measure>& measures, int n_min,
                                       int n_max, std::uint64_t seed, const MeasureConfig& cfg) {
  const auto n_nodes = static_cast<int>(panel.n_nodes());
  require(n_min >= 1 && n_min <= n_max && n_max <= n_nodes, "cluster range must lie within [1, N]");
  require(!measures.empty(), "tuning needs at least one measure");

  auto proxy_embedding = spectral_embedding(string_correlation(panel.nodes(), cfg.gram));
  const int codes = distinct_place_codes(panel.nodes());
  std::vector<Partition> proxies;
  for (int n = n_min; n <= n_max; ++n) proxies.push_back(cluster_embedding(proxy_embedding, ns_mapping(n, codes), seed));

  std::vector<TuningPoint> out;
  for (Measure m : measures) {
    auto embedding = spectral_embedding(compute_measure(panel, m, cfg));
    for (int n = n_min; n <= n_max; ++n) {
      Partition part = cluster_embedding(embedding, n, seed);
      TuningPoint pt;
      pt.n = n;
      pt.measure = m;
      pt.ari = adjusted_rand_index(part, proxies[static_cast<std::size_t>(n - n_min)]);
      pt.disparity = part.k >= 2 ? disparity(part) : std::numeric_limits<double>::quiet_NaN();
      out.push_back(pt);
    }
  }
  return out;
}

}  // namespace gridcorr
