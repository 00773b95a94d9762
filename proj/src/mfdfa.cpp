#include "mfts/mfdfa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mfts/linfit.hpp"
#include "mfts/parallel.hpp"

namespace mfts {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
const double kLnFloor = std::log(kVarianceFloor);
}  // namespace

Profile make_profile(const ReturnSeries& r) {
  const size_t n = r.size();
  if (n < 2) throw std::invalid_argument("make_profile: need at least 2 returns");
  double mean = 0.0;
  for (double v : r.values) mean += v;
  mean /= static_cast<double>(n);
  Profile p;
  p.source_length = n;
  p.values.resize(n);
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    acc += r.values[i] - mean;
    p.values[i] = acc;
  }
  return p;
}

std::vector<double> build_q_grid(double q_min, double q_max, double step) {
  if (!(step > 0.0) || !(q_min <= q_max)) throw std::invalid_argument("build_q_grid: bad range");
  const auto count = static_cast<size_t>(std::llround((q_max - q_min) / step)) + 1;
  std::vector<double> q(count);
  const double snap = 1e-12 * std::max({1.0, std::abs(q_min), std::abs(q_max)});
  for (size_t i = 0; i < count; ++i) {
    double v = q_min + static_cast<double>(i) * step;
    if (std::abs(v) < snap) v = 0.0;
    q[i] = v;
  }
  q.back() = std::min(q.back(), q_max);
  return q;
}

std::vector<int> log_spaced_scales(int s_min, long long s_max, int count) {
  if (s_min < 2 || s_max < s_min || count < 1)
    throw std::invalid_argument("log_spaced_scales: bad parameters");
  std::vector<int> scales;
  scales.reserve(static_cast<size_t>(count));
  const double lo = std::log(static_cast<double>(s_min));
  const double hi = std::log(static_cast<double>(s_max));
  for (int i = 0; i < count; ++i) {
    const double f = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    long long s = std::llround(std::exp(lo + f * (hi - lo)));
    s = std::clamp<long long>(s, s_min, s_max);
    scales.push_back(static_cast<int>(s));
  }
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
  return scales;
}

std::vector<int> default_scale_grid(size_t n) {
  const long long s_max = std::max<long long>(16, static_cast<long long>(n) / 4);
  return log_spaced_scales(16, s_max, 40);
}

namespace {

// Orthonormal polynomial basis of degree <= order on s points spanning [-1, 1],
// built by twice-applied modified Gram-Schmidt. Column-major: basis[j] is the
// j-th column of length s.
std::vector<std::vector<double>> orthonormal_poly_basis(size_t s, int order) {
  const size_t m = static_cast<size_t>(order) + 1;
  std::vector<std::vector<double>> basis(m, std::vector<double>(s));
  std::vector<double> x(s);
  for (size_t i = 0; i < s; ++i)
    x[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(s - 1);
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < s; ++i)
      basis[j][i] = j == 0 ? 1.0 : basis[j - 1][i] * x[i];
  for (size_t j = 0; j < m; ++j) {
    auto& col = basis[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t k = 0; k < j; ++k) {
        const auto& prev = basis[k];
        double dot = 0.0;
        for (size_t i = 0; i < s; ++i) dot += prev[i] * col[i];
        for (size_t i = 0; i < s; ++i) col[i] -= dot * prev[i];
      }
    }
    double norm = 0.0;
    for (size_t i = 0; i < s; ++i) norm += col[i] * col[i];
    norm = std::sqrt(norm);
    for (size_t i = 0; i < s; ++i) col[i] /= norm;
  }
  return basis;
}

// Residual variance of one segment after projecting out the basis.
double segment_variance(const double* seg, size_t s,
                        const std::vector<std::vector<double>>& basis,
                        std::vector<double>* work) {
  work->assign(seg, seg + s);
  double* r = work->data();
  for (const auto& col : basis) {
    double dot = 0.0;
    for (size_t i = 0; i < s; ++i) dot += col[i] * r[i];
    for (size_t i = 0; i < s; ++i) r[i] -= dot * col[i];
  }
  double ss = 0.0;
  for (size_t i = 0; i < s; ++i) ss += r[i] * r[i];
  return ss / static_cast<double>(s);
}

}  // namespace

FluctuationSurface fluctuation_surface(const Profile& y, std::span<const double> q_grid,
                                       std::span<const int> scale_grid, int detrend_order,
                                       int threads) {
  const size_t n = y.values.size();
  if (detrend_order < 1 || detrend_order > 5)
    throw std::invalid_argument("fluctuation_surface: detrend order must be in [1, 5]");
  if (q_grid.empty() || scale_grid.empty())
    throw std::invalid_argument("fluctuation_surface: empty q or scale grid");
  for (double q : q_grid)
    if (!std::isfinite(q)) throw std::invalid_argument("fluctuation_surface: non-finite q");
  {
    const int s_floor = 2 * (detrend_order + 2);
    std::string bad;
    for (int s : scale_grid) {
      if (s < s_floor || static_cast<size_t>(s) > n / 4) bad += " " + std::to_string(s);
    }
    if (!bad.empty())
      throw std::invalid_argument(
          "fluctuation_surface: scales outside [2*(order+2), N/4]:" + bad);
  }

  FluctuationSurface out;
  out.q_grid.assign(q_grid.begin(), q_grid.end());
  out.scale_grid.assign(scale_grid.begin(), scale_grid.end());
  out.detrend_order = detrend_order;
  out.segment_counts.resize(scale_grid.size());
  out.values.assign(q_grid.size() * scale_grid.size(), 0.0);

  const size_t n_scales = scale_grid.size();
  const size_t n_q = q_grid.size();
  std::atomic<long long> floored_total{0};
  std::atomic<size_t> nonzero_scales{0};

  parallel_for(n_scales, threads, [&](size_t is) {
    const size_t s = static_cast<size_t>(scale_grid[is]);
    const size_t n_seg = n / s;  // N_s
    out.segment_counts[is] = static_cast<int>(n_seg);
    const auto basis = orthonormal_poly_basis(s, detrend_order);

    // Log residual variances for the 2*N_s segments (forward then backward).
    std::vector<double> ln_f2(2 * n_seg);
    std::vector<double> work;
    long long floored = 0;
    for (size_t v = 0; v < n_seg; ++v) {
      const double f2 = segment_variance(y.values.data() + v * s, s, basis, &work);
      if (f2 < kVarianceFloor) ++floored;
      ln_f2[v] = f2 > 0.0 ? std::log(f2) : kNegInf;
    }
    for (size_t v = 0; v < n_seg; ++v) {
      const double f2 =
          segment_variance(y.values.data() + (n - (v + 1) * s), s, basis, &work);
      if (f2 < kVarianceFloor) ++floored;
      ln_f2[n_seg + v] = f2 > 0.0 ? std::log(f2) : kNegInf;
    }
    floored_total += floored;

    double max_raw = kNegInf, min_clamped = std::numeric_limits<double>::infinity();
    double sum_clamped = 0.0;
    for (double l : ln_f2) {
      const double c = std::max(l, kLnFloor);
      max_raw = std::max(max_raw, l);
      min_clamped = std::min(min_clamped, c);
      sum_clamped += c;
    }

    if (max_raw == kNegInf) {
      // Exactly polynomial within every segment: F_q(s) = 0 across q.
      for (size_t iq = 0; iq < n_q; ++iq) out.values[iq * n_scales + is] = 0.0;
      return;
    }
    nonzero_scales.fetch_add(1);

    const double inv_2ns = 1.0 / static_cast<double>(2 * n_seg);
    for (size_t iq = 0; iq < n_q; ++iq) {
      const double q = q_grid[iq];
      double f;
      if (std::abs(q) < kQZeroTolerance) {
        f = std::exp(sum_clamped / static_cast<double>(4 * n_seg));
      } else {
        // Generalized mean via a log-sum-exp shift so extreme q stay finite.
        const double half_q = 0.5 * q;
        const double shift = half_q * (q > 0.0 ? max_raw : min_clamped);
        double acc = 0.0;
        if (q > 0.0) {
          for (double l : ln_f2) acc += l == kNegInf ? 0.0 : std::exp(half_q * l - shift);
        } else {
          for (double l : ln_f2) acc += std::exp(half_q * std::max(l, kLnFloor) - shift);
        }
        f = std::exp((shift + std::log(acc * inv_2ns)) / q);
      }
      out.values[iq * n_scales + is] = f;
    }
  });

  out.floored_segments = floored_total.load();
  out.all_zero = nonzero_scales.load() == 0;
  return out;
}

double MultifractalSpectrum::h_at(double q) const {
  for (size_t i = 0; i < q_grid.size(); ++i)
    if (std::abs(q_grid[i] - q) <= 1e-9) return h[i];
  throw std::invalid_argument("spectrum: q = " + std::to_string(q) + " is not on the grid");
}

MultifractalSpectrum fit_hurst(const FluctuationSurface& f, double s_min, double s_max) {
  if (!(s_min > 0.0) || !(s_min < s_max))
    throw std::invalid_argument("fit_hurst: need 0 < s_min < s_max");
  std::vector<size_t> in_range;
  for (size_t is = 0; is < f.n_scales(); ++is) {
    const double s = f.scale_grid[is];
    if (s >= s_min && s <= s_max) in_range.push_back(is);
  }
  if (in_range.size() < 4)
    throw std::invalid_argument("fit_hurst: fewer than 4 scales inside the fit range");

  MultifractalSpectrum sp;
  sp.q_grid = f.q_grid;
  sp.fit_smin = s_min;
  sp.fit_smax = s_max;
  const size_t n_q = f.n_q();
  sp.h.resize(n_q);
  sp.h_stderr.resize(n_q);
  sp.fit_r2.resize(n_q);

  std::vector<double> xs, ys;
  for (size_t iq = 0; iq < n_q; ++iq) {
    xs.clear();
    ys.clear();
    for (size_t is : in_range) {
      const double v = f.at(iq, is);
      if (std::isfinite(v) && v > 0.0) {
        xs.push_back(std::log(static_cast<double>(f.scale_grid[is])));
        ys.push_back(std::log(v));
      } else {
        ++sp.dropped_scales;
      }
    }
    if (xs.size() < 4)
      throw std::invalid_argument("fit_hurst: fewer than 4 usable scales at q = " +
                                  std::to_string(f.q_grid[iq]));
    const LineFit fit = fit_line(xs, ys);
    sp.h[iq] = fit.slope;
    sp.h_stderr[iq] = fit.slope_stderr;
    sp.fit_r2[iq] = fit.r_squared;
  }

  sp.tau = tau_spectrum(sp.h, sp.q_grid);
  bool uniform = n_q >= 3;
  if (uniform) {
    const double step = sp.q_grid[1] - sp.q_grid[0];
    for (size_t i = 2; i < n_q && uniform; ++i)
      uniform = std::abs((sp.q_grid[i] - sp.q_grid[i - 1]) - step) <= 1e-9;
  }
  if (uniform) singularity_spectrum(sp.h, sp.q_grid, &sp.alpha, &sp.f_alpha);

  sp.delta_h = sp.h.front() - sp.h.back();
  for (size_t i = 0; i + 1 < n_q; ++i)
    if (sp.h[i + 1] > sp.h[i] + 1e-9) ++sp.h_monotonicity_violations;
  return sp;
}

std::vector<double> tau_spectrum(std::span<const double> h, std::span<const double> q_grid) {
  if (h.size() != q_grid.size()) throw std::invalid_argument("tau_spectrum: size mismatch");
  std::vector<double> tau(h.size());
  for (size_t i = 0; i < h.size(); ++i) tau[i] = q_grid[i] * h[i] - 1.0;
  return tau;
}

void singularity_spectrum(std::span<const double> h, std::span<const double> q_grid,
                          std::vector<double>* alpha, std::vector<double>* f_alpha) {
  const size_t n = h.size();
  if (n != q_grid.size()) throw std::invalid_argument("singularity_spectrum: size mismatch");
  if (n < 3) throw std::invalid_argument("singularity_spectrum: need at least 3 q points");
  const double step = q_grid[1] - q_grid[0];
  for (size_t i = 1; i < n; ++i)
    if (std::abs((q_grid[i] - q_grid[i - 1]) - step) > 1e-9)
      throw std::invalid_argument("singularity_spectrum: q grid is not uniform");

  alpha->resize(n);
  f_alpha->resize(n);
  for (size_t i = 0; i < n; ++i) {
    double dh;
    if (i == 0)
      dh = (h[1] - h[0]) / step;
    else if (i == n - 1)
      dh = (h[n - 1] - h[n - 2]) / step;
    else
      dh = (h[i + 1] - h[i - 1]) / (2.0 * step);
    const double a = h[i] + q_grid[i] * dh;
    (*alpha)[i] = a;
    (*f_alpha)[i] = q_grid[i] * (a - h[i]) + 1.0;
  }
}

namespace {

size_t grid_index(std::span<const double> grid, double q, const char* what) {
  for (size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid[i] - q) <= 1e-9) return i;
  throw std::invalid_argument(std::string(what) + ": q = " + std::to_string(q) +
                              " is not on the grid");
}

}  // namespace

double delta_h(const MultifractalSpectrum& s, double q_min, double q_max) {
  if (!(q_min < q_max)) throw std::invalid_argument("delta_h: need q_min < q_max");
  const size_t lo = grid_index(s.q_grid, q_min, "delta_h");
  const size_t hi = grid_index(s.q_grid, q_max, "delta_h");
  return s.h[lo] - s.h[hi];
}

DecompositionReport decompose(const MultifractalSpectrum& orig,
                              const MultifractalSpectrum& shuffled,
                              const MultifractalSpectrum& surrogate, double q_min,
                              double q_max) {
  const auto same_grid = [&](const MultifractalSpectrum& a) {
    if (a.q_grid.size() != orig.q_grid.size()) return false;
    for (size_t i = 0; i < a.q_grid.size(); ++i)
      if (std::abs(a.q_grid[i] - orig.q_grid[i]) > 1e-12) return false;
    return true;
  };
  if (!same_grid(shuffled) || !same_grid(surrogate))
    throw std::invalid_argument("decompose: spectra must share one q grid");

  DecompositionReport rep;
  rep.delta_h_orig = delta_h(orig, q_min, q_max);
  rep.delta_h_sh = delta_h(shuffled, q_min, q_max);
  rep.delta_h_su = delta_h(surrogate, q_min, q_max);
  rep.delta_h_corr = rep.delta_h_orig - rep.delta_h_sh;
  if (std::abs(rep.delta_h_sh) >= 1e-6) rep.ratio_R = rep.delta_h_corr / rep.delta_h_sh;
  try {
    rep.h2_orig = orig.h_at(2.0);
  } catch (const std::invalid_argument&) {
    rep.h2_orig = kNaN;  // q = 2 not on the grid
  }
  return rep;
}

}  // namespace mfts
