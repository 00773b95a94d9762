#include "mfts/volatility.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mfts {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kLog2Pi = std::log(2.0 * std::numbers::pi);

double sample_variance(const std::vector<double>& x) {
  const size_t n = x.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return ss / static_cast<double>(n);
}

// One recursion step: sigma2_t from (r_{t-1}, sigma2_{t-1}). Returns a
// non-positive value to signal rejection.
inline double next_variance(const VolModelParams& p, double r_prev, double s2_prev) {
  switch (p.model) {
    case VolModel::garch:
      return p.omega + p.arch_alpha * r_prev * r_prev + p.garch_beta * s2_prev;
    case VolModel::gjr: {
      const double a = r_prev >= 0.0 ? p.arch_alpha : p.arch_alpha + *p.gjr_delta;
      return p.omega + a * r_prev * r_prev + p.garch_beta * s2_prev;
    }
    case VolModel::rgarch: {
      const double den = 1.0 + *p.rg_gamma * r_prev;
      if (!(den > 0.0)) return -1.0;
      return (p.omega + p.arch_alpha * r_prev * r_prev + p.garch_beta * s2_prev) / den;
    }
  }
  return -1.0;
}

}  // namespace

std::string vol_model_name(VolModel m) {
  switch (m) {
    case VolModel::garch: return "garch";
    case VolModel::gjr: return "gjr";
    case VolModel::rgarch: return "rgarch";
  }
  return "?";
}

std::optional<VolModel> parse_vol_model(const std::string& name) {
  if (name == "garch") return VolModel::garch;
  if (name == "gjr") return VolModel::gjr;
  if (name == "rgarch") return VolModel::rgarch;
  return std::nullopt;
}

bool VolModelParams::valid() const {
  if (!(omega > 0.0) || arch_alpha < 0.0 || garch_beta < 0.0) return false;
  if ((model == VolModel::gjr) != gjr_delta.has_value()) return false;
  if ((model == VolModel::rgarch) != rg_gamma.has_value()) return false;
  if (gjr_delta && !std::isfinite(*gjr_delta)) return false;
  if (rg_gamma && !std::isfinite(*rg_gamma)) return false;
  return std::isfinite(omega) && std::isfinite(arch_alpha) && std::isfinite(garch_beta);
}

std::optional<std::vector<double>> filter_variance(const VolModelParams& params,
                                                   const ReturnSeries& r) {
  if (!params.valid()) throw std::invalid_argument("filter_variance: invalid parameters");
  const size_t n = r.size();
  if (n < 2) throw std::invalid_argument("filter_variance: need at least 2 returns");
  std::vector<double> s2(n);
  double init = sample_variance(r.values);
  if (!(init > 0.0)) init = params.omega;
  s2[0] = init;
  for (size_t t = 1; t < n; ++t) {
    s2[t] = next_variance(params, r.values[t - 1], s2[t - 1]);
    if (!(s2[t] > 0.0) || !std::isfinite(s2[t])) return std::nullopt;
  }
  return s2;
}

double log_likelihood(const VolModelParams& params, const ReturnSeries& r) {
  if (!params.valid()) return kNegInf;
  const size_t n = r.size();
  if (n < 2) throw std::invalid_argument("log_likelihood: need at least 2 returns");
  double init = sample_variance(r.values);
  if (!(init > 0.0)) init = params.omega;
  double s2 = init;
  double ll = 0.0;
  for (size_t t = 0; t < n; ++t) {
    if (t > 0) {
      s2 = next_variance(params, r.values[t - 1], s2);
      if (!(s2 > 0.0) || !std::isfinite(s2)) return kNegInf;
    }
    ll += -0.5 * (kLog2Pi + std::log(s2)) - r.values[t] * r.values[t] / (2.0 * s2);
  }
  return std::isfinite(ll) ? ll : kNegInf;
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  if (log_ratio >= 0.0) return true;
  return rng.uniform01() < std::exp(log_ratio);
}

namespace {

VolModelParams unpack(VolModel model, const std::vector<double>& theta) {
  VolModelParams p;
  p.model = model;
  p.omega = theta[0];
  p.arch_alpha = theta[1];
  p.garch_beta = theta[2];
  if (model == VolModel::gjr) p.gjr_delta = theta[3];
  if (model == VolModel::rgarch) p.rg_gamma = theta[3];
  return p;
}

// Flat prior over the validity region: log-posterior = log-likelihood there,
// -inf outside.
double log_posterior(VolModel model, const std::vector<double>& theta,
                     const ReturnSeries& r) {
  const VolModelParams p = unpack(model, theta);
  if (!p.valid()) return kNegInf;
  return log_likelihood(p, r);
}

}  // namespace

VolModelParams VolatilityFit::params_at_mean() const { return unpack(model, mean); }

VolatilityFit estimate(VolModel model, const ReturnSeries& r, const ChainConfig& cfg) {
  if (r.size() < 200) throw std::invalid_argument("estimate: need at least 200 observations");
  if (cfg.burn_in < 0 || cfg.samples < 1) throw std::invalid_argument("estimate: bad chain config");

  ReturnSeries data = r;
  if (cfg.demean) {
    double mean = 0.0;
    for (double v : data.values) mean += v;
    mean /= static_cast<double>(data.size());
    for (double& v : data.values) v -= mean;
  }

  const int k = model == VolModel::garch ? 3 : 4;
  const double var = sample_variance(data.values);

  std::vector<double> theta = {0.1 * std::max(var, 1e-8), 0.1, 0.8};
  if (k == 4) theta.push_back(0.0);
  std::vector<double> step = {0.2 * theta[0], 0.05, 0.05};
  if (k == 4) step.push_back(0.05);

  VolatilityFit fit;
  fit.model = model;
  fit.param_names = {"omega", "alpha", "beta"};
  if (model == VolModel::gjr) fit.param_names.push_back("delta");
  if (model == VolModel::rgarch) fit.param_names.push_back("gamma");

  Rng rng(cfg.seed);
  double lp = log_posterior(model, theta, data);
  if (lp == kNegInf) throw std::runtime_error("estimate: starting point has zero posterior");

  fit.max_log_likelihood = lp;
  fit.posterior.reserve(static_cast<size_t>(cfg.samples));

  std::vector<long long> accepted(static_cast<size_t>(k), 0);
  std::vector<long long> window_accepts(static_cast<size_t>(k), 0);
  long long window_total = 0;
  long long kept_accepts = 0, kept_total = 0;

  double sum_deviance = 0.0;
  std::vector<double> sum_theta(static_cast<size_t>(k), 0.0);
  long long stationary_hits = 0;
  double sum_persistence = 0.0;

  const long long total_sweeps = static_cast<long long>(cfg.burn_in) + cfg.samples;
  for (long long sweep = 0; sweep < total_sweeps; ++sweep) {
    const bool burning = sweep < cfg.burn_in;
    for (int j = 0; j < k; ++j) {
      const double old = theta[static_cast<size_t>(j)];
      theta[static_cast<size_t>(j)] = old + step[static_cast<size_t>(j)] * rng.normal();
      const double lp_new = log_posterior(model, theta, data);
      if (metropolis_accept(lp_new - lp, rng)) {
        lp = lp_new;
        ++accepted[static_cast<size_t>(j)];
        if (burning) ++window_accepts[static_cast<size_t>(j)];
        if (!burning) ++kept_accepts;
      } else {
        theta[static_cast<size_t>(j)] = old;
      }
      if (!burning) ++kept_total;
    }
    fit.max_log_likelihood = std::max(fit.max_log_likelihood, lp);

    if (burning) {
      ++window_total;
      if (window_total == cfg.adapt_interval) {
        for (int j = 0; j < k; ++j) {
          const double rate =
              static_cast<double>(window_accepts[static_cast<size_t>(j)]) / window_total;
          double& sj = step[static_cast<size_t>(j)];
          sj *= std::exp(rate - cfg.target_accept);
          sj = std::clamp(sj, 1e-12, 1e6);
          window_accepts[static_cast<size_t>(j)] = 0;
        }
        window_total = 0;
      }
      continue;
    }

    if (!std::isfinite(lp)) throw std::runtime_error("estimate: chain reached a non-finite state");
    fit.posterior.push_back(theta);
    sum_deviance += -2.0 * lp;
    for (int j = 0; j < k; ++j) sum_theta[static_cast<size_t>(j)] += theta[static_cast<size_t>(j)];
    const double persistence = theta[1] + theta[2];
    sum_persistence += persistence;
    if (persistence < 1.0) ++stationary_hits;
  }

  const double n_kept = static_cast<double>(cfg.samples);
  fit.mean.resize(static_cast<size_t>(k));
  fit.sd.assign(static_cast<size_t>(k), 0.0);
  for (int j = 0; j < k; ++j) fit.mean[static_cast<size_t>(j)] = sum_theta[static_cast<size_t>(j)] / n_kept;
  for (const auto& draw : fit.posterior)
    for (int j = 0; j < k; ++j) {
      const double d = draw[static_cast<size_t>(j)] - fit.mean[static_cast<size_t>(j)];
      fit.sd[static_cast<size_t>(j)] += d * d;
    }
  for (int j = 0; j < k; ++j)
    fit.sd[static_cast<size_t>(j)] = std::sqrt(fit.sd[static_cast<size_t>(j)] / std::max(1.0, n_kept - 1.0));

  fit.acceptance_rate = kept_total > 0 ? static_cast<double>(kept_accepts) / kept_total : 0.0;
  if (fit.acceptance_rate <= 0.05 || fit.acceptance_rate >= 0.8)
    fit.warnings.push_back("acceptance rate " + std::to_string(fit.acceptance_rate) +
                           " outside (0.05, 0.8) after adaptation");

  fit.log_likelihood_at_mean = log_posterior(model, fit.mean, data);
  if (!std::isfinite(fit.log_likelihood_at_mean))
    fit.warnings.push_back("posterior mean lies outside the validity region");
  fit.aic = 2.0 * k - 2.0 * fit.max_log_likelihood;
  const double mean_deviance = sum_deviance / n_kept;
  fit.dic = 2.0 * mean_deviance - (-2.0 * fit.log_likelihood_at_mean);
  fit.persistence_mean = sum_persistence / n_kept;
  fit.stationary_prob = static_cast<double>(stationary_hits) / n_kept;
  return fit;
}

ReturnSeries simulate(const VolModelParams& params, size_t n, uint64_t seed) {
  if (!params.valid()) throw std::invalid_argument("simulate: invalid parameters");
  if (n < 1) throw std::invalid_argument("simulate: need n >= 1");

  ReturnSeries out;
  out.sampling_period = 86400;
  out.scale_factor = 100.0;
  out.values.resize(n);

  const double persistence = params.arch_alpha + params.garch_beta;
  if (persistence >= 1.0)
    std::cerr << "simulate: alpha + beta = " << persistence
              << " >= 1, the simulated variance is non-stationary\n";
  double s2 = persistence < 1.0 ? params.omega / (1.0 - persistence) : params.omega;

  Rng rng(seed);
  double r_prev = 0.0;
  bool have_prev = false;
  for (size_t t = 0; t < n; ++t) {
    if (have_prev) {
      s2 = next_variance(params, r_prev, s2);
      if (!(s2 > 0.0) || !std::isfinite(s2))
        throw std::runtime_error("simulate: variance recursion became non-positive");
    }
    const double sd = std::sqrt(s2);
    double r_t = sd * rng.normal();
    if (params.model == VolModel::rgarch) {
      // The next step divides by 1 + gamma * r_t; resample innovations that
      // would make it non-positive.
      int tries = 0;
      while (!(1.0 + *params.rg_gamma * r_t > 0.0)) {
        if (++tries > 100) throw std::runtime_error("simulate: cannot keep rgarch denominator positive");
        r_t = sd * rng.normal();
      }
    }
    out.values[t] = r_t;
    r_prev = r_t;
    have_prev = true;
  }
  return out;
}

}  // namespace mfts
