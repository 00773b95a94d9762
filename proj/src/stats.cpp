#include "mfts/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfts/linfit.hpp"
#include "mfts/parallel.hpp"
#include "mfts/rng.hpp"

namespace mfts {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

AcfResult acf(const ReturnSeries& r, int max_lag, bool absolute) {
  const size_t n = r.size();
  if (max_lag < 0) throw std::invalid_argument("acf: negative max_lag");
  if (static_cast<size_t>(max_lag) >= n / 2)
    throw std::invalid_argument("acf: max_lag must be below half the series length");

  std::vector<double> x(r.values);
  if (absolute)
    for (double& v : x) v = std::abs(v);

  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  AcfResult out;
  out.series_label = absolute ? "abs_returns" : "returns";
  out.lags.resize(static_cast<size_t>(max_lag) + 1);
  out.values.resize(static_cast<size_t>(max_lag) + 1);
  for (int k = 0; k <= max_lag; ++k) {
    double cov = 0.0;
    for (size_t t = static_cast<size_t>(k); t < n; ++t)
      cov += (x[t] - mean) * (x[t - static_cast<size_t>(k)] - mean);
    out.lags[static_cast<size_t>(k)] = k;
    out.values[static_cast<size_t>(k)] = cov;  // normalized below
  }
  const double var = out.values[0];
  if (!(var > 0.0)) throw std::invalid_argument("acf: zero-variance input");
  for (double& v : out.values) v /= var;
  return out;
}

PowerLawFit fit_power_law_acf(const AcfResult& a, int lag_min, int lag_max) {
  if (lag_min < 1 || lag_min >= lag_max)
    throw std::invalid_argument("fit_power_law_acf: need 1 <= lag_min < lag_max");
  if (static_cast<size_t>(lag_max) >= a.values.size())
    throw std::invalid_argument("fit_power_law_acf: lag_max beyond computed lags");

  std::vector<double> xs, ys;
  xs.reserve(static_cast<size_t>(lag_max - lag_min) + 1);
  ys.reserve(xs.capacity());
  for (int k = lag_min; k <= lag_max; ++k) {
    const double v = a.values[static_cast<size_t>(k)];
    if (!(v > 0.0))
      throw std::invalid_argument("fit_power_law_acf: non-positive ACF at lag " +
                                  std::to_string(k));
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(v));
  }
  const LineFit f = fit_line(xs, ys);
  PowerLawFit out;
  out.exponent = -f.slope;
  out.amplitude = std::exp(f.intercept);
  out.lag_min = lag_min;
  out.lag_max = lag_max;
  out.r_squared = f.r_squared;
  return out;
}

void sample_skew_kurt(std::span<const double> x, double* skewness, double* kurtosis) {
  const size_t n = x.size();
  if (n < 4) {
    *skewness = kNaN;
    *kurtosis = kNaN;
    return;
  }
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : x) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (!(m2 > 0.0)) {
    *skewness = kNaN;
    *kurtosis = kNaN;
    return;
  }
  *skewness = m3 / std::pow(m2, 1.5);
  *kurtosis = m4 / (m2 * m2);
}

namespace {

// One moving-block bootstrap resample: overlapping blocks of length block_len,
// uniformly placed, concatenated and truncated to the source length.
void block_resample(std::span<const double> src, size_t block_len, Rng& rng,
                    std::vector<double>* dst) {
  const size_t n = src.size();
  dst->clear();
  dst->reserve(n);
  const uint64_t n_starts = n - block_len + 1;
  while (dst->size() < n) {
    const size_t start = static_cast<size_t>(rng.bounded(n_starts));
    const size_t take = std::min(block_len, n - dst->size());
    dst->insert(dst->end(), src.begin() + static_cast<ptrdiff_t>(start),
                src.begin() + static_cast<ptrdiff_t>(start + take));
  }
}

double sample_sd(std::span<const double> x) {
  const size_t n = x.size();
  if (n < 2) return kNaN;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

}  // namespace

MomentScan moment_scan(const PriceSeries& p, std::span<const int64_t> periods,
                       const MomentScanConfig& cfg) {
  const size_t np = periods.size();
  MomentScan scan;
  scan.sampling_periods.assign(periods.begin(), periods.end());
  scan.kurtosis.assign(np, kNaN);
  scan.kurtosis_stderr.assign(np, kNaN);
  scan.skewness.assign(np, kNaN);
  scan.skewness_stderr.assign(np, kNaN);
  scan.n_returns.assign(np, 0);
  scan.reliable.assign(np, 0);

  parallel_for(np, cfg.threads, [&](size_t i) {
    const ReturnSeries r = compute_returns(p, periods[i], cfg.scale, false);
    const size_t n = r.size();
    scan.n_returns[i] = static_cast<int64_t>(n);
    scan.reliable[i] = n >= 30 ? 1 : 0;
    sample_skew_kurt(r.values, &scan.skewness[i], &scan.kurtosis[i]);
    if (n < 4 || cfg.bootstrap_resamples < 2) return;

    size_t block_len = static_cast<size_t>(
        std::max<long long>(10, std::llround(std::cbrt(static_cast<double>(n)))));
    block_len = std::min(block_len, n);

    Rng rng(derive_seed(cfg.seed, i));
    std::vector<double> resample, skews, kurts;
    skews.reserve(static_cast<size_t>(cfg.bootstrap_resamples));
    kurts.reserve(skews.capacity());
    for (int b = 0; b < cfg.bootstrap_resamples; ++b) {
      block_resample(r.values, block_len, rng, &resample);
      double sk, ku;
      sample_skew_kurt(resample, &sk, &ku);
      if (std::isfinite(sk) && std::isfinite(ku)) {
        skews.push_back(sk);
        kurts.push_back(ku);
      }
    }
    scan.skewness_stderr[i] = sample_sd(skews);
    scan.kurtosis_stderr[i] = sample_sd(kurts);
  });
  return scan;
}

}  // namespace mfts
