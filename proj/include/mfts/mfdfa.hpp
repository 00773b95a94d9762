#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mfts/ingest.hpp"

namespace mfts {

// Below this per-segment variance, values entering a negative or zeroth moment
// are clamped; occurrences are counted in FluctuationSurface diagnostics.
inline constexpr double kVarianceFloor = 1e-300;

// |q| below this uses the logarithmic (q = 0) averaging rule.
inline constexpr double kQZeroTolerance = 1e-10;

// Cumulative sum of mean-subtracted returns.
struct Profile {
  std::vector<double> values;
  size_t source_length = 0;
};

Profile make_profile(const ReturnSeries& r);

// q-th order fluctuation function F_q(s) on a (q, scale) lattice.
struct FluctuationSurface {
  std::vector<double> q_grid;
  std::vector<int> scale_grid;
  std::vector<double> values;        // row-major [iq * n_scales + is]
  int detrend_order = 3;
  std::vector<int> segment_counts;   // N_s = floor(N/s); 2*N_s segments used
  long long floored_segments = 0;    // segment variances clamped at kVarianceFloor
  bool all_zero = false;             // profile polynomial in every segment at every scale

  size_t n_q() const { return q_grid.size(); }
  size_t n_scales() const { return scale_grid.size(); }
  double at(size_t iq, size_t is) const { return values[iq * scale_grid.size() + is]; }
};

// Uniform q grid qmin, qmin+step, ..., qmax. Points within rounding of zero
// are snapped to exactly 0.
std::vector<double> build_q_grid(double q_min, double q_max, double step);

// count log-spaced integer scales in [s_min, s_max], deduplicated.
std::vector<int> log_spaced_scales(int s_min, long long s_max, int count);

// 40 log-spaced scales between 16 and N/4.
std::vector<int> default_scale_grid(size_t n);

// Segment the profile two-sided (forward and backward), remove a per-segment
// least-squares polynomial of the given order, and aggregate the residual
// variances into F_q(s). Preconditions: every scale s satisfies
// 2*(order+2) <= s <= N/4; order in [1, 5]; q finite.
FluctuationSurface fluctuation_surface(const Profile& y, std::span<const double> q_grid,
                                       std::span<const int> scale_grid, int detrend_order,
                                       int threads = 1);

struct MultifractalSpectrum {
  std::vector<double> q_grid;
  std::vector<double> h;         // generalized Hurst exponents
  std::vector<double> h_stderr;  // OLS slope standard errors
  std::vector<double> fit_r2;
  std::vector<double> tau;       // q*h(q) - 1
  std::vector<double> alpha;     // Hoelder exponents (empty if q grid unusable)
  std::vector<double> f_alpha;
  double fit_smin = 0.0, fit_smax = 0.0;
  double delta_h = 0.0;          // h at grid minimum minus h at grid maximum
  int dropped_scales = 0;        // non-positive F values dropped inside the fit range
  int h_monotonicity_violations = 0;  // soft diagnostic: h should not increase with q

  // h at an on-grid q (1e-9 tolerance); throws when q is off the grid.
  double h_at(double q) const;
};

// Per q, the log-log slope of F_q(s) over scales in [s_min, s_max]. At least
// four positive F values are required per q. alpha/f_alpha are filled when the
// q grid is uniform with >= 3 points, otherwise left empty.
MultifractalSpectrum fit_hurst(const FluctuationSurface& f, double s_min, double s_max);

std::vector<double> tau_spectrum(std::span<const double> h, std::span<const double> q_grid);

// alpha(q) = h + q h', f(alpha) = q (alpha - h) + 1, with h' by central
// differences (one-sided at the ends). Requires a uniform q grid, length >= 3.
void singularity_spectrum(std::span<const double> h, std::span<const double> q_grid,
                          std::vector<double>* alpha, std::vector<double>* f_alpha);

// h(q_min) - h(q_max); both must lie on the spectrum's grid.
double delta_h(const MultifractalSpectrum& s, double q_min, double q_max);

struct DecompositionReport {
  double h2_orig = 0.0;
  double delta_h_orig = 0.0;
  double delta_h_corr = 0.0;  // delta_h_orig - delta_h_sh
  double delta_h_sh = 0.0;
  double delta_h_su = 0.0;
  std::optional<double> ratio_R;  // delta_h_corr / delta_h_sh; empty when delta_h_sh ~ 0
};

// Multifractality-source split from original, shuffled and phase-surrogate
// spectra sharing one q grid.
DecompositionReport decompose(const MultifractalSpectrum& orig,
                              const MultifractalSpectrum& shuffled,
                              const MultifractalSpectrum& surrogate, double q_min,
                              double q_max);

}  // namespace mfts
