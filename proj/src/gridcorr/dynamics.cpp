#include "gridcorr/dynamics.hpp"

#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <thread>

#include "gridcorr/error.hpp"
#include "gridcorr/text_io.hpp"

namespace gridcorr {

std::string_view to_string(ClusterMethod m) {
  return m == ClusterMethod::spectral ? "spectral" : "mst+louvain";
}

ClusterMethod parse_cluster_method(std::string_view s) {
  std::string v = text::lower(text::trim(s));
  if (v == "spectral") return ClusterMethod::spectral;
  if (v == "mst+louvain" || v == "mst_louvain" || v == "louvain" || v == "mst") return ClusterMethod::mst_louvain;
  fail(Errc::invalid_argument, "unknown clustering method '" + std::string(s) + "'");
}

Partition cluster_matrix(const CorrelationMatrix& c, ClusterMethod method, int k, std::uint64_t seed) {
  return method == ClusterMethod::spectral ? spectral_clustering(c, k, seed) : mst_louvain(c, seed);
}

Partition location_proxy_for(const std::vector<NodeName>& nodes, ClusterMethod method, int k, int gram,
                             std::uint64_t seed) {
  return method == ClusterMethod::spectral ? location_proxy(nodes, k, gram, seed)
                                           : location_proxy_louvain(nodes, gram, seed);
}

WindowStats window_stats(const Eigen::MatrixXd& c) {
  const Index n = c.rows();
  require(n >= 1 && c.cols() == n, "window statistics need a square matrix");
  if (asymmetry(c) > 1e-12) fail(Errc::invalid_argument, "window statistics need a symmetric matrix");
  WindowStats s;
  s.mean = n >= 2 ? (c.sum() - c.trace()) / static_cast<double>(n * (n - 1)) : 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  s.largest_eig = es.eigenvalues().maxCoeff();
  return s;
}

int count_windows(Index n_times, int window_hours) {
  require(window_hours >= 2, "window width must be >= 2 hours");
  return static_cast<int>(n_times / window_hours);
}

namespace {

struct WindowOutput {
  std::vector<WindowStats> stats;        // per measure
  std::vector<Partition> partitions;     // per (measure, method)
};

}  // namespace

DynamicsResult run_dynamics(const PricePanel& panel, const DynamicsConfig& cfg) {
  require(!cfg.measures.empty() && !cfg.methods.empty(), "dynamics needs at least one measure and one method");
  for (Measure m : cfg.measures)
    require(m != Measure::string && m != Measure::event_sync_original,
            "dynamics measures are pearson, smoothed_pearson, event_sync, rmt_filtered and sparse");
  const int n_windows = count_windows(panel.n_times(), cfg.window_hours);
  if (n_windows < 2)
    fail(Errc::invalid_argument, "dynamics needs at least two complete windows of " +
                                     std::to_string(cfg.window_hours) + " hours, got " + std::to_string(n_windows));
  const int benchmark = cfg.benchmark.value_or(n_windows - 1);
  if (benchmark < 0 || benchmark >= n_windows)
    fail(Errc::invalid_argument, "benchmark window " + std::to_string(benchmark) + " out of range");

  MeasureConfig mcfg = cfg.measure;
  mcfg.event_sync.eventless = EventlessPolicy::isolate;
  const std::size_t n_meas = cfg.measures.size(), n_meth = cfg.methods.size();

  std::vector<WindowOutput> outputs(static_cast<std::size_t>(n_windows));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_windows));
  auto work = [&](int w) {
    try {
      PricePanel win = slice_window(panel, static_cast<Index>(w) * cfg.window_hours, cfg.window_hours);
      WindowOutput& out = outputs[static_cast<std::size_t>(w)];
      for (Measure m : cfg.measures) {
        CorrelationMatrix c = compute_measure(win, m, mcfg);
        out.stats.push_back(window_stats(c.values));
        for (ClusterMethod method : cfg.methods) out.partitions.push_back(cluster_matrix(c, method, cfg.k, cfg.seed));
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };

  const int workers = std::max(1, std::min(cfg.threads, n_windows));
  if (workers == 1) {
    for (int w = 0; w < n_windows; ++w) work(w);
  } else {
    std::vector<std::thread> pool;
    for (int id = 0; id < workers; ++id)
      pool.emplace_back([&, id] {
        for (int w = id; w < n_windows; w += workers) work(w);
      });
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<Partition> proxies;
  for (ClusterMethod method : cfg.methods)
    proxies.push_back(location_proxy_for(panel.nodes(), method, cfg.k, mcfg.gram, cfg.seed));

  DynamicsResult result;
  result.benchmark = benchmark;
  result.n_windows = n_windows;
  for (std::size_t mi = 0; mi < n_meas; ++mi) {
    for (std::size_t hi = 0; hi < n_meth; ++hi) {
      WindowTrack track;
      track.measure = cfg.measures[mi];
      track.method = cfg.methods[hi];
      const std::size_t slot = mi * n_meth + hi;
      const Partition& bench = outputs[static_cast<std::size_t>(benchmark)].partitions[slot];
      for (int w = 0; w < n_windows; ++w) {
        const auto& out = outputs[static_cast<std::size_t>(w)];
        const Partition& part = out.partitions[slot];
        track.window_index.push_back(w);
        track.mean_corr.push_back(out.stats[mi].mean);
        track.largest_eig.push_back(out.stats[mi].largest_eig);
        track.disparity.push_back(part.k >= 2 ? disparity(part) : std::numeric_limits<double>::quiet_NaN());
        track.ari_benchmark.push_back(adjusted_rand_index(part, bench));
        track.ari_location.push_back(adjusted_rand_index(part, proxies[hi]));
      }
      result.tracks.push_back(std::move(track));
    }
  }
  return result;
}

DynamicsResult run_dynamics(const PricePanel& da, const PricePanel& rt, const DynamicsConfig& cfg) {
  return run_dynamics(compute_delta(da, rt), cfg);
}

std::vector<double> moving_std(const std::vector<double>& track, int w) {
  require(w >= 2, "moving-std window must be >= 2");
  if (static_cast<std::size_t>(w) > track.size())
    fail(Errc::invalid_argument, "moving-std window " + std::to_string(w) + " exceeds track length " +
                                     std::to_string(track.size()));
  std::vector<double> out;
  out.reserve(track.size() - static_cast<std::size_t>(w) + 1);
  for (std::size_t end = static_cast<std::size_t>(w); end <= track.size(); ++end) {
    double mean = 0.0;
    for (std::size_t i = end - static_cast<std::size_t>(w); i < end; ++i) mean += track[i];
    mean /= w;
    double ss = 0.0;
    for (std::size_t i = end - static_cast<std::size_t>(w); i < end; ++i) ss += (track[i] - mean) * (track[i] - mean);
    out.push_back(std::sqrt(ss / (w - 1)));
  }
  return out;
}

TrackSummary summarize(const std::vector<double>& values, const std::vector<int>& window_index) {
  require(values.size() == window_index.size(), "track and window index lengths differ");
  TrackSummary s;
  double sum = 0.0;
  int count = 0;
  s.max = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    sum += values[i];
    ++count;
    if (s.argmax < 0 || values[i] > s.max) {
      s.max = values[i];
      s.argmax = window_index[i];
    }
  }
  s.mean = count > 0 ? sum / count : std::numeric_limits<double>::quiet_NaN();
  return s;
}

int threads_from_env() {
  const char* env = std::getenv("GRIDCORR_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    long long v = text::parse_int(env);
    if (v < 1) fail(Errc::invalid_argument, "GRIDCORR_THREADS must be >= 1");
    return static_cast<int>(std::min<long long>(v, 256));
  } catch (const Error&) {
    fail(Errc::invalid_argument, "GRIDCORR_THREADS must be a positive integer");
  }
}

}  // namespace gridcorr
