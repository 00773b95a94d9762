#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mfts/ingest.hpp"

namespace mfts {

struct AcfResult {
  std::vector<int> lags;       // 0..max_lag, in units of the sampling period
  std::vector<double> values;  // values[0] == 1
  std::string series_label;
};

// Sample autocorrelation, normalized by the global sample variance (the biased
// estimator, so |values[k]| <= 1). With absolute = true the ACF of |r| is
// computed instead.
AcfResult acf(const ReturnSeries& r, int max_lag, bool absolute);

struct PowerLawFit {
  double exponent = 0.0;   // mu in acf(k) ~ k^-mu
  double amplitude = 0.0;
  int lag_min = 0;
  int lag_max = 0;
  double r_squared = 0.0;
};

// Least-squares line in log-log coordinates over lags [lag_min, lag_max].
// Every ACF value in the range must be strictly positive.
PowerLawFit fit_power_law_acf(const AcfResult& a, int lag_min, int lag_max);

struct MomentScan {
  std::vector<int64_t> sampling_periods;  // seconds
  std::vector<double> kurtosis;           // m4/m2^2, Gaussian expectation 3
  std::vector<double> kurtosis_stderr;
  std::vector<double> skewness;           // m3/m2^(3/2)
  std::vector<double> skewness_stderr;
  std::vector<int64_t> n_returns;
  std::vector<uint8_t> reliable;          // 0 when fewer than 30 returns
};

struct MomentScanConfig {
  double scale = 1.0;
  int bootstrap_resamples = 1000;  // moving-block bootstrap for the std errors
  uint64_t seed = 20140101;
  int threads = 1;
};

// Kurtosis and skewness of the return series at each sampling period, with
// moving-block bootstrap standard errors (block length max(10, N^(1/3))).
MomentScan moment_scan(const PriceSeries& p, std::span<const int64_t> periods,
                       const MomentScanConfig& cfg = {});

// Standardized third and fourth sample moments of one series.
void sample_skew_kurt(std::span<const double> x, double* skewness, double* kurtosis);

}  // namespace mfts
