#pragma once

#include <cstdint>
#include <optional>

#include "gridcorr/data_model.hpp"
#include "gridcorr/defaults.hpp"
#include "gridcorr/metrics.hpp"

namespace gridcorr {

/// Generator name recorded in output metadata.
inline constexpr const char* kSynthGenerator = "mt19937_64+std::normal_distribution";

struct SynthSpec {
  int n_blocks = 4;
  int nodes_per_block = 25;
  Index T = 2000;
  double intra_corr = 0.6;
  double market_beta = 0.3;
  double spike_rate = 0.02;   // events per hour per block
  double spike_scale = 10.0;
  std::optional<int> regime_switch_window;  // block membership reshuffled from this window on
  int window_hours = defaults::kWindowHours;
  std::uint64_t seed = 0;

  bool operator==(const SynthSpec&) const = default;
};

struct SynthPanel {
  PricePanel panel;
  Partition truth;                        // membership at the start
  std::optional<Partition> truth_after;   // membership after the regime switch
};

/// Validates the spec, including positive definiteness of the implied factor correlation.
void validate(const SynthSpec& spec);

/// X_i = beta M + sqrt(rho) F_b(i) + sqrt(1 - rho) eps_i + block-shared signed spikes.
SynthPanel generate_block_panel(const SynthSpec& spec);

/// iid standard Gaussian entries.
PricePanel generate_random_panel(Index n, Index t, std::uint64_t seed);

/// 2012-01-01T00:00:00Z, the first timestamp of generated panels.
Timestamp synth_start();

}  // namespace gridcorr
