#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mfts/ingest.hpp"
#include "mfts/rng.hpp"

namespace mfts {

enum class VolModel { garch, gjr, rgarch };

std::string vol_model_name(VolModel m);
std::optional<VolModel> parse_vol_model(const std::string& name);

// Conditional-variance recursion parameters. gjr_delta is present only for
// gjr, rg_gamma only for rgarch.
struct VolModelParams {
  VolModel model = VolModel::garch;
  double omega = 0.0;       // > 0
  double arch_alpha = 0.0;  // >= 0
  double garch_beta = 0.0;  // >= 0
  std::optional<double> gjr_delta;
  std::optional<double> rg_gamma;

  bool valid() const;
  int param_count() const { return model == VolModel::garch ? 3 : 4; }
};

// Conditional variance path. sigma2[0] is the sample variance of r (falling
// back to omega for a degenerate series); the recursion fills the rest.
// Returns nullopt when any implied variance is non-positive (the rgarch
// denominator can flip sign), which estimation treats as likelihood -inf.
std::optional<std::vector<double>> filter_variance(const VolModelParams& params,
                                                   const ReturnSeries& r);

// Gaussian log-likelihood sum_t [-0.5 ln(2 pi sigma2_t) - r_t^2/(2 sigma2_t)];
// -inf when the variance recursion rejects the parameter point.
double log_likelihood(const VolModelParams& params, const ReturnSeries& r);

// Accept a Metropolis proposal with probability min(1, exp(log_ratio)).
bool metropolis_accept(double log_ratio, Rng& rng);

struct ChainConfig {
  int burn_in = 20000;
  int samples = 80000;
  uint64_t seed = 1;
  int adapt_interval = 200;     // step-size adaptation cadence during burn-in
  double target_accept = 0.4;
  bool demean = false;          // subtract the sample mean before fitting
};

struct VolatilityFit {
  VolModel model = VolModel::garch;
  std::vector<std::string> param_names;
  std::vector<std::vector<double>> posterior;  // retained draws, row = draw
  std::vector<double> mean;                    // posterior means
  std::vector<double> sd;                      // posterior standard deviations
  double aic = 0.0;                            // 2k - 2 max log L over the chain
  double dic = 0.0;                            // 2 Dbar - D(theta_bar)
  double acceptance_rate = 0.0;                // post burn-in, all components
  double log_likelihood_at_mean = 0.0;
  double max_log_likelihood = 0.0;
  double persistence_mean = 0.0;               // posterior mean of alpha + beta
  double stationary_prob = 0.0;                // posterior P(alpha + beta < 1)
  std::vector<std::string> warnings;

  VolModelParams params_at_mean() const;
};

// Componentwise random-walk Metropolis under flat priors on the validity
// region; Gaussian proposal step sizes adapt during burn-in and are frozen
// afterwards. Requires at least 200 observations.
VolatilityFit estimate(VolModel model, const ReturnSeries& r, const ChainConfig& cfg);

// Seeded Gaussian innovations driven through the chosen recursion.
ReturnSeries simulate(const VolModelParams& params, size_t n, uint64_t seed);

}  // namespace mfts
