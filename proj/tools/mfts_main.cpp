#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mfts/ingest.hpp"
#include "mfts/mfdfa.hpp"
#include "mfts/parallel.hpp"
#include "mfts/rng.hpp"
#include "mfts/rolling.hpp"
#include "mfts/stats.hpp"
#include "mfts/surrogate.hpp"
#include "mfts/table.hpp"
#include "mfts/volatility.hpp"

namespace fs = std::filesystem;
using namespace mfts;

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

// "90", "90s", "5m", "2h", "30d", "1w" -> seconds
int64_t parse_duration(const std::string& text) {
  size_t pos = 0;
  double v;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad duration: '" + text + "'");
  }
  const std::string suffix = text.substr(pos);
  int64_t mult;
  if (suffix.empty() || suffix == "s")
    mult = 1;
  else if (suffix == "m")
    mult = 60;
  else if (suffix == "h")
    mult = 3600;
  else if (suffix == "d")
    mult = 86400;
  else if (suffix == "w")
    mult = 604800;
  else
    throw std::invalid_argument("bad duration suffix in '" + text + "' (use s, m, h, d, w)");
  const int64_t seconds = std::llround(v * static_cast<double>(mult));
  if (seconds < 1) throw std::invalid_argument("duration must be positive: '" + text + "'");
  return seconds;
}

std::vector<double> parse_q_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw std::invalid_argument("q grid must be min:max:step, got '" + text + "'");
  return build_q_grid(std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]));
}

// "smin:smax:count"; smax may be "auto" (resolved to n/4)
std::vector<int> parse_scale_grid(const std::string& text, size_t n) {
  const auto parts = split(text, ':');
  if (parts.size() != 3)
    throw std::invalid_argument("scale grid must be min:max:count, got '" + text + "'");
  const long long lo = std::stoll(parts[0]);
  const long long hi = parts[1] == "auto" ? static_cast<long long>(n) / 4 : std::stoll(parts[1]);
  return log_spaced_scales(static_cast<int>(lo), hi, std::stoi(parts[2]));
}

// "smin:smax"; either side may be "auto"
std::pair<double, double> parse_fit_range(const std::string& text, double auto_min,
                                          double auto_max) {
  const auto parts = split(text, ':');
  if (parts.size() != 2)
    throw std::invalid_argument("fit range must be min:max, got '" + text + "'");
  const double lo = parts[0] == "auto" ? auto_min : std::stod(parts[0]);
  const double hi = parts[1] == "auto" ? auto_max : std::stod(parts[1]);
  return {lo, hi};
}

using KeyValues = std::vector<std::pair<std::string, std::string>>;

void write_config_echo(const fs::path& dir, const KeyValues& kv) {
  std::ofstream out(dir / "config.txt");
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
}

void write_summary(const fs::path& dir, const std::vector<std::string>& lines) {
  std::ofstream out(dir / "summary.txt");
  for (const auto& line : lines) {
    out << line << "\n";
    std::cout << line << "\n";
  }
}

struct CommonOpts {
  std::string input;
  std::string output = "mfts_out";
  std::string base_period = "1m";
  std::string dt = "1m";
  double scale = 1.0;
  bool normalize = false;
  int threads = 0;

  int resolved_threads() const { return threads > 0 ? threads : default_thread_count(); }

  void add_to(CLI::App* cmd, bool with_returns = true) {
    cmd->fallthrough();  // lets --config reach the top-level app from here
    cmd->add_option("--input", input, "price file: (timestamp, price) rows")->required();
    cmd->add_option("--output", output, "output directory")->capture_default_str();
    cmd->add_option("--base-period", base_period, "grid period of the input")
        ->capture_default_str();
    cmd->add_option("--threads", threads, "worker cap (0 = MFTS_THREADS or hardware)")
        ->capture_default_str();
    if (with_returns) {
      cmd->add_option("--dt", dt, "return sampling period")->capture_default_str();
      cmd->add_option("--scale", scale, "return scale factor")->capture_default_str();
      cmd->add_flag("--normalize", normalize, "zero mean, unit variance returns");
    }
  }

  PriceSeries load(KeyValues* kv) const {
    kv->emplace_back("input", input);
    kv->emplace_back("base_period", base_period);
    return load_prices(input, parse_duration(base_period));
  }

  ReturnSeries returns_of(const PriceSeries& p, KeyValues* kv) const {
    kv->emplace_back("dt", dt);
    kv->emplace_back("scale", format_double(scale));
    kv->emplace_back("normalize", normalize ? "1" : "0");
    return compute_returns(p, parse_duration(dt), scale, normalize);
  }
};

struct MfdfaOpts {
  std::string q = "-25:25:0.2";
  std::string scales = "16:auto:40";
  int detrend_order = 3;
  std::string fit_range = "3000:270000";

  void add_to(CLI::App* cmd) {
    cmd->add_option("--q", q, "q grid min:max:step")->capture_default_str();
    cmd->add_option("--scales", scales, "scale grid min:max:count (max may be auto)")
        ->capture_default_str();
    cmd->add_option("--detrend-order", detrend_order, "detrending polynomial order (1-5)")
        ->capture_default_str();
    cmd->add_option("--fit-range", fit_range, "scaling fit range min:max (either may be auto)")
        ->capture_default_str();
  }

  void echo(KeyValues* kv) const {
    kv->emplace_back("q", q);
    kv->emplace_back("scales", scales);
    kv->emplace_back("detrend_order", std::to_string(detrend_order));
    kv->emplace_back("fit_range", fit_range);
  }

  // Full pipeline on one series: surface table + spectrum table under dir,
  // file names suffixed by tag.
  MultifractalSpectrum run(const ReturnSeries& r, int threads, const fs::path& dir,
                           const std::string& tag,
                           const std::string& fit_range_override = "") const {
    const Profile profile = make_profile(r);
    const std::vector<double> q_grid = parse_q_grid(q);
    const std::vector<int> scale_grid = parse_scale_grid(scales, r.size());
    const FluctuationSurface f =
        fluctuation_surface(profile, q_grid, scale_grid, detrend_order, threads);

    TableWriter fq(dir / ("fq" + tag + ".tsv"));
    const std::string fq_cols[] = {"q", "s", "F"};
    fq.header(fq_cols);
    for (size_t iq = 0; iq < f.n_q(); ++iq)
      for (size_t is = 0; is < f.n_scales(); ++is) {
        const double row[] = {f.q_grid[iq], static_cast<double>(f.scale_grid[is]),
                              f.at(iq, is)};
        fq.row(row);
      }

    const std::string& range = fit_range_override.empty() ? fit_range : fit_range_override;
    const auto [lo, hi] = parse_fit_range(range, static_cast<double>(scale_grid.front()),
                                          static_cast<double>(scale_grid.back()));
    const MultifractalSpectrum sp = fit_hurst(f, lo, hi);

    TableWriter hq(dir / ("hurst" + tag + ".tsv"));
    hq.comment("fit range [" + format_double(sp.fit_smin) + ", " + format_double(sp.fit_smax) +
               "], detrend order " + std::to_string(detrend_order));
    const std::string hq_cols[] = {"q", "h", "h_stderr", "tau", "alpha", "f_alpha"};
    hq.header(hq_cols);
    const double nan = std::nan("");
    for (size_t iq = 0; iq < sp.q_grid.size(); ++iq) {
      const double row[] = {sp.q_grid[iq],
                            sp.h[iq],
                            sp.h_stderr[iq],
                            sp.tau[iq],
                            sp.alpha.empty() ? nan : sp.alpha[iq],
                            sp.f_alpha.empty() ? nan : sp.f_alpha[iq]};
      hq.row(row);
    }
    return sp;
  }
};

std::string describe_series(const PriceSeries& p, const ReturnSeries& r) {
  return "slots = " + std::to_string(p.size()) + " (forward-filled " +
         std::to_string(p.filled_count()) + "), returns = " + std::to_string(r.size()) +
         " at dt = " + std::to_string(r.sampling_period) + "s";
}

std::optional<double> spectrum_h2(const MultifractalSpectrum& sp) {
  try {
    return sp.h_at(2.0);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

std::vector<std::string> spectrum_summary(const MultifractalSpectrum& sp) {
  std::vector<std::string> lines;
  if (const auto h2 = spectrum_h2(sp)) lines.push_back("h(2) = " + format_double(*h2));
  lines.push_back("delta_h = " + format_double(sp.delta_h) + " (q in [" +
                  format_double(sp.q_grid.front()) + ", " + format_double(sp.q_grid.back()) +
                  "])");
  if (sp.dropped_scales > 0)
    lines.push_back("warning: dropped " + std::to_string(sp.dropped_scales) +
                    " non-positive F values inside the fit range");
  if (sp.h_monotonicity_violations > 0)
    lines.push_back("note: h(q) increases with q at " +
                    std::to_string(sp.h_monotonicity_violations) + " grid steps");
  return lines;
}

// ---- subcommand handlers ---------------------------------------------------

int run_returns(const CommonOpts& common, bool overlapping) {
  KeyValues kv{{"command", "returns"}};
  const PriceSeries p = common.load(&kv);
  kv.emplace_back("dt", common.dt);
  kv.emplace_back("scale", format_double(common.scale));
  kv.emplace_back("normalize", common.normalize ? "1" : "0");
  kv.emplace_back("overlapping", overlapping ? "1" : "0");
  const ReturnSeries r = compute_returns(p, parse_duration(common.dt), common.scale,
                                         common.normalize, overlapping);
  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);
  write_return_series(dir / "returns.tsv", r);
  write_summary(dir, {describe_series(p, r), "wrote " + (dir / "returns.tsv").string()});
  return 0;
}

int run_acf(const CommonOpts& common, int max_lag, bool absolute, const std::string& fit) {
  KeyValues kv{{"command", "acf"}};
  const PriceSeries p = common.load(&kv);
  const ReturnSeries r = common.returns_of(p, &kv);
  kv.emplace_back("max_lag", std::to_string(max_lag));
  kv.emplace_back("absolute", absolute ? "1" : "0");
  const AcfResult a = acf(r, max_lag, absolute);

  const fs::path dir(common.output);
  fs::create_directories(dir);
  TableWriter t(dir / "acf.tsv");
  t.comment("series: " + a.series_label);
  const std::string cols[] = {"lag", "acf"};
  t.header(cols);
  for (size_t k = 0; k < a.values.size(); ++k) {
    const double row[] = {static_cast<double>(a.lags[k]), a.values[k]};
    t.row(row);
  }

  std::vector<std::string> lines = {
      describe_series(p, r),
      "acf of " + a.series_label + " up to lag " + std::to_string(max_lag)};
  if (!fit.empty()) {
    kv.emplace_back("power_fit_range", fit);
    const auto parts = split(fit, ':');
    if (parts.size() != 2) throw std::invalid_argument("power fit range must be lmin:lmax");
    const PowerLawFit pf = fit_power_law_acf(a, std::stoi(parts[0]), std::stoi(parts[1]));
    TableWriter ft(dir / "acf_power_fit.tsv");
    const std::string fcols[] = {"exponent", "amplitude", "lag_min", "lag_max", "r_squared"};
    ft.header(fcols);
    const double row[] = {pf.exponent, pf.amplitude, static_cast<double>(pf.lag_min),
                          static_cast<double>(pf.lag_max), pf.r_squared};
    ft.row(row);
    lines.push_back("power-law exponent mu = " + format_double(pf.exponent) + " over lags [" +
                    parts[0] + ", " + parts[1] + "], r2 = " + format_double(pf.r_squared));
  }
  write_config_echo(dir, kv);
  write_summary(dir, lines);
  return 0;
}

int run_moments(const CommonOpts& common, const std::string& periods_text, int bootstrap,
                uint64_t seed) {
  KeyValues kv{{"command", "moments"}};
  const PriceSeries p = common.load(&kv);
  kv.emplace_back("periods", periods_text);
  kv.emplace_back("scale", format_double(common.scale));
  kv.emplace_back("bootstrap", std::to_string(bootstrap));
  kv.emplace_back("seed", std::to_string(seed));

  std::vector<int64_t> periods;
  for (const auto& tok : split(periods_text, ',')) periods.push_back(parse_duration(tok));
  MomentScanConfig cfg;
  cfg.scale = common.scale;
  cfg.bootstrap_resamples = bootstrap;
  cfg.seed = seed;
  cfg.threads = common.resolved_threads();
  const MomentScan scan = moment_scan(p, periods, cfg);

  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);
  TableWriter t(dir / "moments.tsv");
  const std::string cols[] = {"period_s",       "n_returns", "kurtosis", "kurtosis_stderr",
                              "skewness", "skewness_stderr", "reliable"};
  t.header(cols);
  for (size_t i = 0; i < periods.size(); ++i) {
    const double row[] = {static_cast<double>(scan.sampling_periods[i]),
                          static_cast<double>(scan.n_returns[i]),
                          scan.kurtosis[i],
                          scan.kurtosis_stderr[i],
                          scan.skewness[i],
                          scan.skewness_stderr[i],
                          static_cast<double>(scan.reliable[i])};
    t.row(row);
  }
  write_summary(dir, {"moment scan over " + std::to_string(periods.size()) + " periods",
                      "wrote " + (dir / "moments.tsv").string()});
  return 0;
}

int run_mfdfa(const CommonOpts& common, const MfdfaOpts& opts) {
  KeyValues kv{{"command", "mfdfa"}};
  const PriceSeries p = common.load(&kv);
  const ReturnSeries r = common.returns_of(p, &kv);
  opts.echo(&kv);
  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);
  const MultifractalSpectrum sp = opts.run(r, common.resolved_threads(), dir, "");
  std::vector<std::string> lines = {describe_series(p, r)};
  const auto extra = spectrum_summary(sp);
  lines.insert(lines.end(), extra.begin(), extra.end());
  write_summary(dir, lines);
  return 0;
}

int run_surrogate(const CommonOpts& common, const std::string& kind, uint64_t seed, int count) {
  KeyValues kv{{"command", "surrogate"}};
  const PriceSeries p = common.load(&kv);
  const ReturnSeries r = common.returns_of(p, &kv);
  kv.emplace_back("kind", kind);
  kv.emplace_back("seed", std::to_string(seed));
  kv.emplace_back("count", std::to_string(count));

  SurrogateSpec spec;
  if (kind == "shuffle")
    spec.kind = SurrogateSpec::Kind::shuffle;
  else if (kind == "phase")
    spec.kind = SurrogateSpec::Kind::phase;
  else
    throw std::invalid_argument("surrogate kind must be shuffle or phase, got '" + kind + "'");
  spec.seed = seed;
  spec.count = count;
  const auto ensemble = make_surrogates(r, spec);

  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);
  std::vector<std::string> lines = {describe_series(p, r)};
  for (size_t i = 0; i < ensemble.size(); ++i) {
    const fs::path file = dir / ("surrogate_" + std::to_string(i) + ".tsv");
    const std::string comments[] = {"kind = " + kind + ", base seed = " + std::to_string(seed) +
                                    ", realization = " + std::to_string(i) + ", stream seed = " +
                                    std::to_string(derive_seed(seed, i))};
    write_return_series(file, ensemble[i], comments);
    lines.push_back("wrote " + file.string());
  }
  write_summary(dir, lines);
  return 0;
}

int run_decompose(const CommonOpts& common, const MfdfaOpts& opts, uint64_t seed,
                  const std::string& surrogate_fit_range) {
  KeyValues kv{{"command", "decompose"}};
  const PriceSeries p = common.load(&kv);
  const ReturnSeries r = common.returns_of(p, &kv);
  opts.echo(&kv);
  kv.emplace_back("surrogate_fit_range", surrogate_fit_range);
  kv.emplace_back("seed", std::to_string(seed));

  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);

  const int threads = common.resolved_threads();
  const MultifractalSpectrum orig = opts.run(r, threads, dir, "_original");
  const MultifractalSpectrum sh =
      opts.run(shuffle_surrogate(r, derive_seed(seed, 1)), threads, dir, "_shuffled");
  const MultifractalSpectrum su = opts.run(phase_surrogate(r, derive_seed(seed, 2)), threads,
                                           dir, "_surrogate", surrogate_fit_range);
  const DecompositionReport rep =
      decompose(orig, sh, su, orig.q_grid.front(), orig.q_grid.back());

  TableWriter t(dir / "decompose.tsv");
  const std::string cols[] = {"h2", "delta_h", "delta_h_corr", "delta_h_sh", "delta_h_su", "R"};
  t.header(cols);
  const double row[] = {rep.h2_orig,   rep.delta_h_orig, rep.delta_h_corr,
                        rep.delta_h_sh, rep.delta_h_su,  rep.ratio_R.value_or(std::nan(""))};
  t.row(row);

  std::vector<std::string> lines = {describe_series(p, r),
                                    "h(2) = " + format_double(rep.h2_orig),
                                    "delta_h = " + format_double(rep.delta_h_orig),
                                    "delta_h_corr = " + format_double(rep.delta_h_corr),
                                    "delta_h_sh = " + format_double(rep.delta_h_sh),
                                    "delta_h_su = " + format_double(rep.delta_h_su)};
  lines.push_back(rep.ratio_R ? "R = " + format_double(*rep.ratio_R)
                              : "R undefined (delta_h_sh below 1e-6)");
  write_summary(dir, lines);
  return 0;
}

int run_garch(const CommonOpts& common, const std::string& model_name, const ChainConfig& chain) {
  KeyValues kv{{"command", "garch"}};
  const PriceSeries p = common.load(&kv);
  const ReturnSeries r = common.returns_of(p, &kv);
  kv.emplace_back("model", model_name);
  kv.emplace_back("burn_in", std::to_string(chain.burn_in));
  kv.emplace_back("samples", std::to_string(chain.samples));
  kv.emplace_back("seed", std::to_string(chain.seed));
  kv.emplace_back("demean", chain.demean ? "1" : "0");

  const auto model = parse_vol_model(model_name);
  if (!model)
    throw std::invalid_argument("model must be garch, gjr or rgarch, got '" + model_name + "'");
  const VolatilityFit fit = estimate(*model, r, chain);

  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);

  TableWriter chain_out(dir / "chain.tsv");
  chain_out.comment("retained draws after " + std::to_string(chain.burn_in) + " burn-in sweeps");
  chain_out.header(fit.param_names);
  for (const auto& draw : fit.posterior) chain_out.row(draw);

  std::ofstream table(dir / "garch_summary.tsv");
  table << "param\tmean\tsd\n";
  for (size_t j = 0; j < fit.param_names.size(); ++j)
    table << fit.param_names[j] << "\t" << format_double(fit.mean[j]) << "\t"
          << format_double(fit.sd[j]) << "\n";

  std::vector<std::string> lines = {describe_series(p, r), "model = " + model_name};
  for (size_t j = 0; j < fit.param_names.size(); ++j)
    lines.push_back(fit.param_names[j] + " = " + format_double(fit.mean[j]) + " (sd " +
                    format_double(fit.sd[j]) + ")");
  lines.push_back("aic = " + format_double(fit.aic) + " (from the along-chain max log L)");
  lines.push_back("dic = " + format_double(fit.dic));
  lines.push_back("acceptance_rate = " + format_double(fit.acceptance_rate));
  lines.push_back("max_log_likelihood = " + format_double(fit.max_log_likelihood));
  lines.push_back("persistence alpha+beta = " + format_double(fit.persistence_mean) +
                  ", P(alpha+beta < 1) = " + format_double(fit.stationary_prob));
  for (const auto& w : fit.warnings) lines.push_back("warning: " + w);
  write_summary(dir, lines);
  return 0;
}

int run_rolling(const CommonOpts& common, const std::string& window, const std::string& step,
                const MfdfaOpts& opts, int scale_count) {
  KeyValues kv{{"command", "rolling"}};
  const PriceSeries p = common.load(&kv);
  const ReturnSeries r = common.returns_of(p, &kv);
  kv.emplace_back("window", window);
  kv.emplace_back("step", step);
  kv.emplace_back("q", opts.q);
  kv.emplace_back("detrend_order", std::to_string(opts.detrend_order));
  kv.emplace_back("fit_range", opts.fit_range);
  kv.emplace_back("scale_count", std::to_string(scale_count));

  RollingConfig cfg;
  cfg.window = parse_duration(window);
  cfg.step = parse_duration(step);
  cfg.q_grid = parse_q_grid(opts.q);
  cfg.detrend_order = opts.detrend_order;
  cfg.scale_count = scale_count;
  const auto [lo, hi] = parse_fit_range(opts.fit_range, 100.0, 0.0);
  cfg.fit_smin = lo;
  cfg.fit_smax = hi;  // 0 resolves to window/4
  cfg.threads = common.resolved_threads();
  const RollingResult roll = rolling_mfdfa(r, cfg);

  const fs::path dir(common.output);
  fs::create_directories(dir);
  write_config_echo(dir, kv);
  TableWriter t(dir / "rolling.tsv");
  t.comment("window = " + std::to_string(roll.window_samples) +
            " samples, step = " + std::to_string(roll.step_samples) + " samples");
  const std::string cols[] = {"window_end_timestamp", "h2", "delta_h", "fit_r2"};
  t.header(cols);
  size_t failed = 0;
  for (size_t w = 0; w < roll.h2.size(); ++w) {
    const double rest[] = {roll.h2[w], roll.delta_h[w], roll.fit_r2[w]};
    t.row_mixed(roll.window_end_timestamps[w], rest);
    if (std::isnan(roll.h2[w])) ++failed;
  }
  write_summary(dir,
                {describe_series(p, r),
                 std::to_string(roll.h2.size()) + " windows of " +
                     std::to_string(roll.window_samples) + " samples, step " +
                     std::to_string(roll.step_samples) +
                     (failed ? ", " + std::to_string(failed) + " failed" : "")});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multifractal and volatility analysis of regularly sampled price series"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "key = value configuration file, one [section] per subcommand; "
                 "flags take precedence");

  CommonOpts c_returns, c_acf, c_moments, c_mfdfa, c_surr, c_dec, c_garch, c_roll;
  MfdfaOpts m_mfdfa, m_dec, m_roll;

  auto* cmd_returns = app.add_subcommand("returns", "log-returns at a sampling period");
  bool overlapping = false;
  c_returns.add_to(cmd_returns);
  cmd_returns->add_flag("--overlapping", overlapping, "lag-k differences on the full grid");

  auto* cmd_acf = app.add_subcommand("acf", "autocorrelation of (absolute) returns");
  int max_lag = 100;
  bool absolute = false;
  std::string acf_fit;
  c_acf.add_to(cmd_acf);
  cmd_acf->add_option("--max-lag", max_lag, "largest lag")->capture_default_str();
  cmd_acf->add_flag("--absolute", absolute, "use |r|");
  cmd_acf->add_option("--power-fit", acf_fit, "fit acf ~ lag^-mu over lags lmin:lmax");

  auto* cmd_moments = app.add_subcommand("moments", "kurtosis and skewness vs sampling period");
  std::string periods = "1m,2m,5m,10m,30m,1h,2h,6h,12h,1d,2d,1w,2w";
  int bootstrap = 1000;
  uint64_t moments_seed = 20140101;
  c_moments.add_to(cmd_moments, false);
  cmd_moments->add_option("--periods", periods, "comma-separated sampling periods")
      ->capture_default_str();
  cmd_moments->add_option("--scale", c_moments.scale, "return scale factor")
      ->capture_default_str();
  cmd_moments->add_option("--bootstrap", bootstrap, "block-bootstrap resamples")
      ->capture_default_str();
  cmd_moments->add_option("--seed", moments_seed, "bootstrap seed")->capture_default_str();

  auto* cmd_mfdfa = app.add_subcommand("mfdfa", "generalized Hurst and singularity spectra");
  c_mfdfa.add_to(cmd_mfdfa);
  m_mfdfa.add_to(cmd_mfdfa);

  auto* cmd_surr = app.add_subcommand("surrogate", "shuffled or phase-randomized series");
  std::string kind = "shuffle";
  uint64_t surr_seed = 1;
  int count = 1;
  c_surr.add_to(cmd_surr);
  cmd_surr->add_option("--kind", kind, "shuffle | phase")->capture_default_str();
  cmd_surr->add_option("--seed", surr_seed, "surrogate seed")->capture_default_str();
  cmd_surr->add_option("--count", count, "ensemble size")->capture_default_str();

  auto* cmd_dec =
      app.add_subcommand("decompose", "multifractality sources via shuffled + phase surrogates");
  uint64_t dec_seed = 1;
  std::string surr_fit = "100:100000";
  c_dec.add_to(cmd_dec);
  m_dec.add_to(cmd_dec);
  cmd_dec->add_option("--seed", dec_seed, "surrogate seed")->capture_default_str();
  cmd_dec->add_option("--surrogate-fit-range", surr_fit,
                      "fit range for the phase-surrogate spectrum")
      ->capture_default_str();

  auto* cmd_garch = app.add_subcommand("garch", "Bayesian volatility model estimation");
  std::string model = "garch";
  ChainConfig chain;
  c_garch.dt = "1d";
  c_garch.scale = 100.0;
  c_garch.add_to(cmd_garch);
  cmd_garch->add_option("--model", model, "garch | gjr | rgarch")->capture_default_str();
  cmd_garch->add_option("--burn-in", chain.burn_in, "burn-in sweeps")->capture_default_str();
  cmd_garch->add_option("--samples", chain.samples, "retained sweeps")->capture_default_str();
  cmd_garch->add_option("--seed", chain.seed, "chain seed")->capture_default_str();
  cmd_garch->add_flag("--demean", chain.demean, "subtract the sample mean before fitting");

  auto* cmd_roll = app.add_subcommand("rolling", "windowed multifractality tracking");
  std::string window = "30d", step = "1d";
  int scale_count = 20;
  m_roll.fit_range = "100:auto";
  c_roll.add_to(cmd_roll);
  cmd_roll->add_option("--window", window, "window length")->capture_default_str();
  cmd_roll->add_option("--step", step, "window step")->capture_default_str();
  cmd_roll->add_option("--q", m_roll.q, "q grid min:max:step")->capture_default_str();
  cmd_roll->add_option("--detrend-order", m_roll.detrend_order, "detrending order")
      ->capture_default_str();
  cmd_roll->add_option("--fit-range", m_roll.fit_range, "per-window fit range (auto = window/4)")
      ->capture_default_str();
  cmd_roll->add_option("--scale-count", scale_count, "log-spaced scales per window")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help() << "\n";
    return 1;
  }

  try {
    if (cmd_returns->parsed()) return run_returns(c_returns, overlapping);
    if (cmd_acf->parsed()) return run_acf(c_acf, max_lag, absolute, acf_fit);
    if (cmd_moments->parsed()) return run_moments(c_moments, periods, bootstrap, moments_seed);
    if (cmd_mfdfa->parsed()) return run_mfdfa(c_mfdfa, m_mfdfa);
    if (cmd_surr->parsed()) return run_surrogate(c_surr, kind, surr_seed, count);
    if (cmd_dec->parsed()) return run_decompose(c_dec, m_dec, dec_seed, surr_fit);
    if (cmd_garch->parsed()) return run_garch(c_garch, model, chain);
    if (cmd_roll->parsed()) return run_rolling(c_roll, window, step, m_roll, scale_count);
    std::cerr << "no subcommand given\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mfts: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "mfts: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "mfts: internal error: " << e.what() << "\n";
    return 2;
  }
}
