#include "gridcorr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "gridcorr/error.hpp"

namespace gridcorr {

Timestamp synth_start() { return std::chrono::sys_days{std::chrono::year{2012} / 1 / 1}; }

namespace {

std::vector<Timestamp> hourly_axis(Index t) {
  std::vector<Timestamp> ts(static_cast<std::size_t>(t));
  for (Index i = 0; i < t; ++i) ts[static_cast<std::size_t>(i)] = synth_start() + std::chrono::hours(i);
  return ts;
}

}  // namespace

void validate(const SynthSpec& s) {
  require(s.n_blocks >= 1 && s.nodes_per_block >= 1, "need at least one block and one node per block");
  require(static_cast<long long>(s.n_blocks) * s.nodes_per_block >= 2, "need at least two nodes");
  require(s.T >= 2, "need T >= 2");
  require(std::isfinite(s.intra_corr) && s.intra_corr >= 0.0 && s.intra_corr < 1.0, "intra_corr must lie in [0, 1)");
  require(std::isfinite(s.market_beta) && s.market_beta >= 0.0, "market_beta must be >= 0");
  require(std::isfinite(s.spike_rate) && s.spike_rate >= 0.0, "spike_rate must be >= 0");
  require(std::isfinite(s.spike_scale) && s.spike_scale >= 0.0, "spike_scale must be >= 0");
  require(s.window_hours >= 2, "window_hours must be >= 2");
  if (s.regime_switch_window) {
    require(*s.regime_switch_window >= 1, "regime_switch_window must be >= 1");
    require(static_cast<Index>(*s.regime_switch_window) * s.window_hours < s.T,
            "regime switch lies beyond the end of the panel");
  }
  // Implied covariance: beta^2 11' + rho blockdiag(11') + (1 - rho) I.
  const Index n = static_cast<Index>(s.n_blocks) * s.nodes_per_block;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Constant(n, n, s.market_beta * s.market_beta);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i / s.nodes_per_block == j / s.nodes_per_block) cov(i, j) += s.intra_corr;
  cov.diagonal().array() += 1.0 - s.intra_corr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0)) fail(Errc::invalid_argument, "implied covariance is not positive definite");
}

SynthPanel generate_block_panel(const SynthSpec& s) {
  validate(s);
  const int nb = s.n_blocks;
  const Index n = static_cast<Index>(nb) * s.nodes_per_block;
  const Index t_len = s.T;

  std::mt19937_64 rng(s.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::poisson_distribution<int> events(s.spike_rate);
  std::bernoulli_distribution coin(0.5);

  std::vector<int> block0(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) block0[static_cast<std::size_t>(i)] = static_cast<int>(i / s.nodes_per_block);
  std::vector<int> block1 = block0;
  Index switch_at = t_len;
  if (s.regime_switch_window) {
    switch_at = static_cast<Index>(*s.regime_switch_window) * s.window_hours;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (Index i = 0; i < n; ++i)
      block1[static_cast<std::size_t>(i)] = perm[static_cast<std::size_t>(i)] / s.nodes_per_block;
  }

  const double load = std::sqrt(s.intra_corr), idio = std::sqrt(1.0 - s.intra_corr);
  Eigen::MatrixXd x(n, t_len);
  Eigen::VectorXd factor(nb), spike(nb);
  for (Index t = 0; t < t_len; ++t) {
    double market = gauss(rng);
    for (int b = 0; b < nb; ++b) factor(b) = gauss(rng);
    for (int b = 0; b < nb; ++b) {
      spike(b) = 0.0;
      if (s.spike_rate > 0.0) {
        int count = events(rng);
        for (int e = 0; e < count; ++e) spike(b) += coin(rng) ? s.spike_scale : -s.spike_scale;
      }
    }
    const auto& block = t < switch_at ? block0 : block1;
    for (Index i = 0; i < n; ++i) {
      int b = block[static_cast<std::size_t>(i)];
      x(i, t) = s.market_beta * market + load * factor(b) + idio * gauss(rng) + spike(b);
    }
  }

  std::vector<NodeName> names;
  names.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i)
    names.push_back(parse_node_name("BLK" + std::to_string(i / s.nodes_per_block) + "_NODE" +
                                    std::to_string(i % s.nodes_per_block)));
  std::vector<std::string> raw;
  for (const auto& nn : names) raw.push_back(nn.raw);

  SynthPanel out{PricePanel(std::move(x), std::move(names), hourly_axis(t_len), Component::delta),
                 make_partition(block0, "planted", s.seed), std::nullopt};
  out.truth.nodes = raw;
  if (s.regime_switch_window) {
    out.truth_after = make_partition(block1, "planted_after_switch", s.seed);
    out.truth_after->nodes = raw;
  }
  return out;
}

PricePanel generate_random_panel(Index n, Index t, std::uint64_t seed) {
  require(n >= 2 && t >= 2, "random panel needs N >= 2 and T >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd x(n, t);
  for (Index j = 0; j < t; ++j)
    for (Index i = 0; i < n; ++i) x(i, j) = gauss(rng);
  std::vector<NodeName> names;
  for (Index i = 0; i < n; ++i) names.push_back(parse_node_name("RAND_" + std::to_string(i)));
  return PricePanel(std::move(x), std::move(names), hourly_axis(t), Component::delta);
}

}  // namespace gridcorr
