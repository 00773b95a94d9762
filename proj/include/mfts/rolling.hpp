#pragma once

#include <cstdint>
#include <vector>

#include "mfts/ingest.hpp"
#include "mfts/mfdfa.hpp"

namespace mfts {

struct RollingConfig {
  int64_t window = 0;  // seconds; must cover >= 1000 samples
  int64_t step = 0;    // seconds; >= 1 sample
  std::vector<double> q_grid;  // defaults to -25..25 step 0.2 when empty
  int detrend_order = 3;
  int scale_count = 20;        // per-window log-spaced scales, 16 .. window/4
  double fit_smin = 100.0;
  double fit_smax = 0.0;       // <= 0 means window_samples / 4
  int threads = 1;
};

struct RollingResult {
  std::vector<int64_t> window_end_timestamps;
  std::vector<double> h2;       // NaN where the window fit failed
  std::vector<double> delta_h;  // h(q_min) - h(q_max) on the configured grid
  std::vector<double> fit_r2;   // r-squared of the q = 2 scaling fit
  int64_t window = 0;           // seconds
  int64_t step = 0;             // seconds
  size_t window_samples = 0;
  size_t step_samples = 0;
};

// Full MF-DFA per window, stamped at the window's last sample. Windows advance
// by step; failed windows produce NaN entries and processing continues.
RollingResult rolling_mfdfa(const ReturnSeries& r, const RollingConfig& cfg);

}  // namespace mfts
