#include "mfts/rolling.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "mfts/parallel.hpp"

namespace mfts {

RollingResult rolling_mfdfa(const ReturnSeries& r, const RollingConfig& cfg) {
  if (r.sampling_period < 1) throw std::invalid_argument("rolling_mfdfa: bad sampling period");
  if (cfg.window < r.sampling_period || cfg.step < r.sampling_period)
    throw std::invalid_argument("rolling_mfdfa: window and step must cover >= 1 sample");

  const size_t w = static_cast<size_t>(cfg.window / r.sampling_period);
  const size_t step = static_cast<size_t>(cfg.step / r.sampling_period);
  if (w < 1000) throw std::invalid_argument("rolling_mfdfa: window must cover >= 1000 samples");
  if (w > r.size()) throw std::invalid_argument("rolling_mfdfa: window longer than the series");

  const std::vector<double> q_grid =
      cfg.q_grid.empty() ? build_q_grid(-25.0, 25.0, 0.2) : cfg.q_grid;
  const std::vector<int> scales =
      log_spaced_scales(16, static_cast<long long>(w) / 4, cfg.scale_count);
  const double fit_smax = cfg.fit_smax > 0.0 ? cfg.fit_smax : static_cast<double>(w) / 4.0;

  const size_t n_windows = (r.size() - w) / step + 1;
  RollingResult out;
  out.window = cfg.window;
  out.step = cfg.step;
  out.window_samples = w;
  out.step_samples = step;
  out.window_end_timestamps.resize(n_windows);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.h2.assign(n_windows, nan);
  out.delta_h.assign(n_windows, nan);
  out.fit_r2.assign(n_windows, nan);

  parallel_for(n_windows, cfg.threads, [&](size_t wi) {
    const size_t offset = wi * step;
    out.window_end_timestamps[wi] = r.timestamp(offset + w - 1);
    try {
      const ReturnSeries slice = slice_returns(r, offset, w);
      const Profile profile = make_profile(slice);
      const FluctuationSurface surface =
          fluctuation_surface(profile, q_grid, scales, cfg.detrend_order, 1);
      const MultifractalSpectrum sp = fit_hurst(surface, cfg.fit_smin, fit_smax);
      out.delta_h[wi] = sp.delta_h;
      try {
        out.h2[wi] = sp.h_at(2.0);
        for (size_t iq = 0; iq < sp.q_grid.size(); ++iq)
          if (std::abs(sp.q_grid[iq] - 2.0) <= 1e-9) out.fit_r2[wi] = sp.fit_r2[iq];
      } catch (const std::invalid_argument&) {
        // q = 2 not on the grid; h2 stays NaN
      }
    } catch (const std::invalid_argument&) {
      // window fit failed; sentinel NaNs already in place
    }
  });
  return out;
}

}  // namespace mfts
