#include "gridcorr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gridcorr/error.hpp"
#include "gridcorr/text_io.hpp"

namespace gridcorr {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::pearson: return "pearson";
    case Measure::smoothed_pearson: return "smoothed_pearson";
    case Measure::event_sync: return "event_sync";
    case Measure::event_sync_original: return "event_sync_original";
    case Measure::rmt_filtered: return "rmt_filtered";
    case Measure::sparse: return "sparse";
    case Measure::string: return "string";
  }
  return "?";
}

Measure parse_measure(std::string_view s) {
  std::string l = text::lower(text::trim(s));
  if (l == "pearson") return Measure::pearson;
  if (l == "smoothed_pearson" || l == "smoothed") return Measure::smoothed_pearson;
  if (l == "event_sync" || l == "es") return Measure::event_sync;
  if (l == "event_sync_original") return Measure::event_sync_original;
  if (l == "rmt_filtered" || l == "rmt") return Measure::rmt_filtered;
  if (l == "sparse") return Measure::sparse;
  if (l == "string") return Measure::string;
  fail(Errc::invalid_argument, "unknown measure: " + std::string(s));
}

double CorrelationMatrix::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end() || !std::holds_alternative<double>(it->second))
    fail(Errc::invalid_argument, "matrix has no numeric parameter '" + key + "'");
  return std::get<double>(it->second);
}

double asymmetry(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

namespace {

// Copies the upper triangle onto the lower one so the result is exactly symmetric.
void mirror_upper(Eigen::MatrixXd& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
}

void check_nonconstant(const PricePanel& panel) {
  for (Index i = 0; i < panel.n_nodes(); ++i) {
    auto row = panel.values().row(i);
    if (row.minCoeff() == row.maxCoeff())
      fail(Errc::undefined, "correlation undefined: series " + panel.nodes()[static_cast<std::size_t>(i)].raw +
                                " has zero variance");
  }
}

CorrelationMatrix normalise_covariance(const Eigen::MatrixXd& cov, const PricePanel& panel, Measure measure) {
  const Index n = cov.rows();
  Eigen::VectorXd inv_sd(n);
  for (Index i = 0; i < n; ++i) {
    if (!(cov(i, i) > 0.0))
      fail(Errc::undefined, "correlation undefined: series " + panel.nodes()[static_cast<std::size_t>(i)].raw +
                                " has zero variance");
    inv_sd(i) = 1.0 / std::sqrt(cov(i, i));
  }
  CorrelationMatrix out;
  out.values = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  mirror_upper(out.values);
  out.values = out.values.cwiseMax(-1.0).cwiseMin(1.0);
  out.values.diagonal().setOnes();
  out.measure = measure;
  out.nodes = panel.node_names();
  return out;
}

}  // namespace

CorrelationMatrix pearson(const PricePanel& panel) {
  check_nonconstant(panel);
  const auto& x = panel.values();
  Eigen::MatrixXd centered = x.colwise() - x.rowwise().mean();
  Eigen::MatrixXd cov = (centered * centered.transpose()) / static_cast<double>(x.cols());
  return normalise_covariance(cov, panel, Measure::pearson);
}

WeightVector exponential_weights(Index length, double theta) {
  require(length >= 1, "weight vector length must be >= 1");
  if (!(theta > 0.0)) fail(Errc::invalid_argument, "smoothing decay theta must be > 0");
  WeightVector w;
  w.weights.resize(length);
  for (Index t = 0; t < length; ++t) w.weights(t) = std::exp(static_cast<double>(t + 1 - length) / theta);
  w.weights /= w.weights.sum();
  w.theta = theta;
  return w;
}

WeightVector uniform_weights(Index length) {
  require(length >= 1, "weight vector length must be >= 1");
  WeightVector w;
  w.weights = Eigen::VectorXd::Constant(length, 1.0 / static_cast<double>(length));
  return w;
}

CorrelationMatrix weighted_pearson(const PricePanel& panel, const WeightVector& w) {
  require(w.weights.size() == panel.n_times(), "weight vector length does not match panel length");
  require((w.weights.array() >= 0.0).all(), "weights must be nonnegative");
  require(std::abs(w.weights.sum() - 1.0) <= 1e-9, "weights must sum to 1");
  const auto& x = panel.values();
  Eigen::VectorXd mean = x * w.weights;
  Eigen::MatrixXd centered = x.colwise() - mean;
  Eigen::MatrixXd scaled = centered * w.weights.asDiagonal();
  Eigen::MatrixXd cov = scaled * centered.transpose();
  auto out = normalise_covariance(cov, panel, Measure::smoothed_pearson);
  if (w.theta) out.params["theta"] = *w.theta;
  return out;
}

CorrelationMatrix smoothed_pearson(const PricePanel& panel, double theta) {
  return weighted_pearson(panel, exponential_weights(panel.n_times(), theta));
}

std::size_t TernarySeries::event_count() const {
  return static_cast<std::size_t>(std::count_if(events.begin(), events.end(), [](int e) { return e != 0; }));
}

std::vector<Index> TernarySeries::event_times() const {
  std::vector<Index> out;
  for (std::size_t t = 0; t < events.size(); ++t)
    if (events[t] != 0) out.push_back(static_cast<Index>(t));
  return out;
}

namespace {

double midpoint_median(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TernarySeries ternary_filter(std::span<const double> series) {
  require(!series.empty(), "ternary filter needs a non-empty series");
  std::vector<double> pos, neg;
  for (double x : series) {
    if (x > 0.0) pos.push_back(x);
    else if (x < 0.0) neg.push_back(x);
  }
  TernarySeries out;
  out.mp = pos.empty() ? std::numeric_limits<double>::infinity() : midpoint_median(pos);
  out.mn = neg.empty() ? -std::numeric_limits<double>::infinity() : midpoint_median(neg);
  out.events.reserve(series.size());
  for (double x : series) out.events.push_back(x > out.mp ? 1 : (x < out.mn ? -1 : 0));
  return out;
}

TernarySeries ternary_filter(const Eigen::Ref<const Eigen::RowVectorXd>& series) {
  std::vector<double> tmp(series.data(), series.data() + series.size());
  if (series.innerStride() != 1)
    for (Index i = 0; i < series.size(); ++i) tmp[static_cast<std::size_t>(i)] = series(i);
  return ternary_filter(std::span<const double>(tmp));
}

double event_sync_original(std::span<const Index> a, std::span<const Index> b, int tau) {
  require(tau >= 0, "tau must be >= 0");
  if (a.empty() || b.empty()) fail(Errc::undefined, "event synchronisation undefined for a series with no events");
  // c(x|y) counts pairs with 0 < |dt| <= tau as 1 and coincidences as 1/2; the
  // absolute lag makes c(x|y) == c(y|x).
  double c = 0.0;
  std::size_t lo = 0;
  for (Index ta : a) {
    while (lo < b.size() && b[lo] < ta - tau) ++lo;
    for (std::size_t k = lo; k < b.size() && b[k] <= ta + tau; ++k) c += (b[k] == ta) ? 0.5 : 1.0;
  }
  return 2.0 * c / std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double event_sync_original(const TernarySeries& a, const TernarySeries& b, int tau) {
  auto ta = a.event_times();
  auto tb = b.event_times();
  return event_sync_original(std::span<const Index>(ta), std::span<const Index>(tb), tau);
}

Eigen::MatrixXd event_sync_counts(const std::vector<TernarySeries>& series, int tau) {
  require(tau >= 0, "tau must be >= 0");
  const Index n = static_cast<Index>(series.size());
  require(n >= 1, "no series");
  const Index len = static_cast<Index>(series.front().events.size());
  Eigen::MatrixXd events(n, len), window(n, len);
  for (Index i = 0; i < n; ++i) {
    const auto& e = series[static_cast<std::size_t>(i)].events;
    require(static_cast<Index>(e.size()) == len, "ternary series have different lengths");
    std::vector<double> prefix(static_cast<std::size_t>(len) + 1, 0.0);
    for (Index t = 0; t < len; ++t) {
      events(i, t) = e[static_cast<std::size_t>(t)];
      prefix[static_cast<std::size_t>(t) + 1] = prefix[static_cast<std::size_t>(t)] + e[static_cast<std::size_t>(t)];
    }
    for (Index t = 0; t < len; ++t) {
      Index lo = std::max<Index>(0, t - tau);
      Index hi = std::min<Index>(len, t + tau + 1);
      window(i, t) = prefix[static_cast<std::size_t>(hi)] - prefix[static_cast<std::size_t>(lo)];
    }
  }
  // Integer-valued doubles well below 2^53: the product is exact and symmetric.
  Eigen::MatrixXd j = events * window.transpose();
  mirror_upper(j);
  return j;
}

CorrelationMatrix event_sync_matrix(const PricePanel& panel, const EventSyncOptions& opts) {
  require(opts.tau >= 0, "tau must be >= 0");
  const Index n = panel.n_nodes();
  std::vector<TernarySeries> series;
  series.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) series.push_back(ternary_filter(panel.values().row(i)));
  Eigen::MatrixXd j = event_sync_counts(series, opts.tau);

  std::vector<char> isolated(static_cast<std::size_t>(n), 0);
  int n_isolated = 0;
  auto reject = [&](Index i, const std::string& why) {
    if (opts.eventless == EventlessPolicy::isolate) {
      isolated[static_cast<std::size_t>(i)] = 1;
      ++n_isolated;
      return;
    }
    fail(Errc::undefined, "event synchronisation undefined: series " +
                              panel.nodes()[static_cast<std::size_t>(i)].raw + " " + why);
  };
  for (Index i = 0; i < n; ++i)
    if (series[static_cast<std::size_t>(i)].event_count() == 0) reject(i, "has no events");
  for (Index i = 0; i < n; ++i) {
    if (!isolated[static_cast<std::size_t>(i)]) continue;
    j.row(i).setZero();
    j.col(i).setZero();
  }

  Eigen::VectorXd norm(n);
  for (Index i = 0; i < n; ++i) {
    if (isolated[static_cast<std::size_t>(i)]) {
      norm(i) = 1.0;
      continue;
    }
    double d = opts.normalization == EventSyncNormalization::diagonal ? j(i, i) : j.row(i).sum();
    if (!(d > 0.0)) {
      if (opts.normalization == EventSyncNormalization::row_sum)
        fail(Errc::undefined, "row-sum normaliser is non-positive for series " +
                                  panel.nodes()[static_cast<std::size_t>(i)].raw);
      reject(i, "has non-positive self-synchronisation");
      j.row(i).setZero();
      j.col(i).setZero();
      norm(i) = 1.0;
      continue;
    }
    norm(i) = 1.0 / std::sqrt(d);
  }

  CorrelationMatrix out;
  out.values = norm.asDiagonal() * j * norm.asDiagonal();
  mirror_upper(out.values);
  double clamped = 0;
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      double v = out.values(a, b);
      if (v > 1.0 || v < -1.0) {
        v = std::clamp(v, -1.0, 1.0);
        out.values(a, b) = out.values(b, a) = v;
        ++clamped;
      }
    }
  for (Index i = 0; i < n; ++i) {
    if (isolated[static_cast<std::size_t>(i)] || opts.normalization == EventSyncNormalization::diagonal)
      out.values(i, i) = 1.0;
  }
  out.measure = Measure::event_sync;
  out.nodes = panel.node_names();
  out.params["tau"] = static_cast<double>(opts.tau);
  out.params["normalization"] =
      std::string(opts.normalization == EventSyncNormalization::diagonal ? "diagonal" : "row_sum");
  out.params["clamped"] = clamped;
  out.params["isolated"] = static_cast<double>(n_isolated);
  return out;
}

CorrelationMatrix event_sync_original_matrix(const PricePanel& panel, int tau) {
  const Index n = panel.n_nodes();
  std::vector<std::vector<Index>> times;
  for (Index i = 0; i < n; ++i) {
    times.push_back(ternary_filter(panel.values().row(i)).event_times());
    if (times.back().empty())
      fail(Errc::undefined, "event synchronisation undefined: series " +
                                panel.nodes()[static_cast<std::size_t>(i)].raw + " has no events");
  }
  CorrelationMatrix out;
  out.values.resize(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = a; b < n; ++b) {
      double q = event_sync_original(std::span<const Index>(times[static_cast<std::size_t>(a)]),
                                     std::span<const Index>(times[static_cast<std::size_t>(b)]), tau);
      out.values(a, b) = out.values(b, a) = q;
    }
  out.measure = Measure::event_sync_original;
  out.nodes = panel.node_names();
  out.params["tau"] = static_cast<double>(tau);
  return out;
}

namespace {

using Spectrum = std::vector<std::pair<std::string, double>>;

Spectrum gram_spectrum(std::string_view s, int p) {
  std::map<std::string, double, std::less<>> counts;
  if (static_cast<int>(s.size()) < p) {
    counts[std::string(s)] += 1.0;
  } else {
    for (std::size_t i = 0; i + static_cast<std::size_t>(p) <= s.size(); ++i)
      counts[std::string(s.substr(i, static_cast<std::size_t>(p)))] += 1.0;
  }
  return {counts.begin(), counts.end()};
}

double dot(const Spectrum& a, const Spectrum& b) {
  double acc = 0.0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (i->first < j->first) ++i;
    else if (j->first < i->first) ++j;
    else {
      acc += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return acc;
}

}  // namespace

double string_kernel(std::string_view s, std::string_view t, int p) {
  require(p >= 1, "gram length must be >= 1");
  require(!s.empty() && !t.empty(), "string kernel needs non-empty strings");
  auto a = gram_spectrum(s, p);
  auto b = gram_spectrum(t, p);
  return dot(a, b) / std::sqrt(dot(a, a) * dot(b, b));
}

CorrelationMatrix string_correlation(const std::vector<NodeName>& nodes, int p) {
  require(p >= 1, "gram length must be >= 1");
  const Index n = static_cast<Index>(nodes.size());
  std::vector<Spectrum> spectra;
  std::vector<double> self;
  for (const auto& node : nodes) {
    require(!node.raw.empty(), "node names must be non-empty");
    spectra.push_back(gram_spectrum(node.raw, p));
    self.push_back(std::sqrt(dot(spectra.back(), spectra.back())));
  }
  CorrelationMatrix out;
  out.values = Eigen::MatrixXd::Identity(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index b = a + 1; b < n; ++b) {
      auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
      double v = dot(spectra[ua], spectra[ub]) / (self[ua] * self[ub]);
      out.values(a, b) = out.values(b, a) = std::min(v, 1.0);
    }
  out.measure = Measure::string;
  for (const auto& node : nodes) out.nodes.push_back(node.raw);
  out.params["p"] = static_cast<double>(p);
  return out;
}

}  // namespace gridcorr
