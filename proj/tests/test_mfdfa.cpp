#include <doctest.h>

#include <cmath>

#include "mfts/mfdfa.hpp"
#include "mfts/surrogate.hpp"
#include "mfdfa_reference.hpp"
#include "synthetic.hpp"

using namespace mfts;
using mfts_test::binomial_cascade;
using mfts_test::cascade_h;
using mfts_test::cascade_tau;
using mfts_test::gaussian_series;

namespace {

ReturnSeries series_of(std::vector<double> values) {
  ReturnSeries r;
  r.sampling_period = 60;
  r.values = std::move(values);
  return r;
}

std::vector<int> dyadic_scales(size_t n, int lo_exp) {
  std::vector<int> s;
  for (int e = lo_exp; (size_t{1} << e) <= n / 4; ++e) s.push_back(1 << e);
  return s;
}

// Exact monofractal surface F_q(s) = s^H for every q.
FluctuationSurface synthetic_surface(double hurst) {
  FluctuationSurface f;
  f.q_grid = build_q_grid(-4, 4, 1.0);
  f.scale_grid = {16, 32, 64, 128, 256};
  f.segment_counts.assign(f.scale_grid.size(), 1);
  f.values.resize(f.q_grid.size() * f.scale_grid.size());
  for (size_t iq = 0; iq < f.q_grid.size(); ++iq)
    for (size_t is = 0; is < f.scale_grid.size(); ++is)
      f.values[iq * f.scale_grid.size() + is] = std::pow(double(f.scale_grid[is]), hurst);
  return f;
}

}  // namespace

TEST_CASE("profile is the cumulative sum of mean-removed returns") {
  const Profile p = make_profile(series_of({1.0, -1.0, 1.0, -1.0}));
  CHECK(p.values == std::vector<double>{1.0, 0.0, 1.0, 0.0});

  const Profile flat = make_profile(series_of(std::vector<double>(1000, 2.5)));
  for (double v : flat.values) CHECK(v == 0.0);
}

TEST_CASE("profile matches an independent running-sum recomputation") {
  const ReturnSeries r = gaussian_series(10000, 99);
  const Profile p = make_profile(r);
  double mean = 0.0;
  for (double v : r.values) mean += v;
  mean /= double(r.size());
  double acc = 0.0, max_abs = 0.0;
  for (size_t i = 0; i < r.size(); ++i) {
    acc += r.values[i] - mean;
    CHECK(std::abs(p.values[i] - acc) <= 1e-12);
    max_abs = std::max(max_abs, std::abs(r.values[i]));
  }
  // the profile returns to zero up to accumulated rounding
  CHECK(std::abs(p.values.back()) <= 1e-9 * double(r.size()) * max_abs);
}

TEST_CASE("constant returns give an all-zero flagged surface") {
  const Profile p = make_profile(series_of(std::vector<double>(1024, 2.5)));
  const std::vector<double> q = build_q_grid(-4, 4, 2.0);
  const std::vector<int> scales = {16, 32, 64, 128, 256};
  const FluctuationSurface f = fluctuation_surface(p, q, scales, 3);
  CHECK(f.all_zero);
  for (double v : f.values) CHECK(v == 0.0);
}

TEST_CASE("surface equals the naive reference on small seeded series") {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    const size_t n = 128 + (seed % 4) * 128;
    const int order = 1 + int(seed % 5);
    const Profile p = make_profile(gaussian_series(n, seed));
    const std::vector<double> q = {-4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0};
    std::vector<int> scales;
    for (int s : {12, 16, 24, 32, 48, 64, 96, 128})
      if (s >= 2 * (order + 2) && size_t(s) <= n / 4) scales.push_back(s);
    const FluctuationSurface f = fluctuation_surface(p, q, scales, order);
    for (size_t is = 0; is < scales.size(); ++is) {
      const auto ref = mfts_test::naive_fluctuation(p.values, q, size_t(scales[is]), order);
      for (size_t iq = 0; iq < q.size(); ++iq)
        CHECK(std::abs(f.at(iq, is) - ref[iq]) / ref[iq] <= 1e-10);
    }
  }
}

TEST_CASE("surface at N = 2^16 matches the reference at q = 2") {
  const Profile p = make_profile(gaussian_series(size_t{1} << 16, 7));
  const std::vector<double> q = {2.0};
  const std::vector<int> scales = {100, 1000, 10000};
  const FluctuationSurface f = fluctuation_surface(p, q, scales, 3, 2);
  for (size_t is = 0; is < scales.size(); ++is) {
    const auto ref = mfts_test::naive_fluctuation(p.values, q, size_t(scales[is]), 3);
    CHECK(std::abs(f.at(0, is) - ref[0]) / ref[0] <= 1e-10);
  }
}

TEST_CASE("fluctuation function is a non-decreasing generalized mean in q") {
  const Profile p = make_profile(mfts_test::student_t_series(8192, 3, 12));
  const std::vector<double> q = build_q_grid(-25, 25, 1.0);
  const FluctuationSurface f = fluctuation_surface(p, q, default_scale_grid(8192), 3);
  size_t i_lo = 0, i_zero = 0, i_hi = q.size() - 1;
  for (size_t i = 0; i < q.size(); ++i)
    if (q[i] == 0.0) i_zero = i;
  for (size_t is = 0; is < f.n_scales(); ++is) {
    for (size_t iq = 0; iq + 1 < q.size(); ++iq)
      CHECK(f.at(iq + 1, is) >= f.at(iq, is) * (1.0 - 1e-12));
    CHECK(f.at(i_lo, is) <= f.at(i_zero, is));
    CHECK(f.at(i_zero, is) <= f.at(i_hi, is));
  }
}

TEST_CASE("locally polynomial segments are floored for negative moments") {
  // zero first half plus a sign-balanced second half: the series mean is
  // exactly 0, so the profile is exactly 0 across the first half and those
  // segments detrend to variance 0
  ReturnSeries r;
  r.sampling_period = 60;
  r.values.assign(2048, 0.0);
  for (int i = 0; i < 2048; ++i) r.values.push_back(i % 2 == 0 ? 1.0 : -1.0);

  const Profile p = make_profile(r);
  const std::vector<double> q = {-2.0, 0.0, 2.0};
  const FluctuationSurface f = fluctuation_surface(p, q, std::vector<int>{64, 128}, 3);
  CHECK(!f.all_zero);
  CHECK(f.floored_segments > 0);
  for (size_t is = 0; is < f.n_scales(); ++is) {
    CHECK(f.at(0, is) > 0.0);  // q = -2 stays finite and positive
    CHECK(std::isfinite(f.at(0, is)));
    CHECK(f.at(2, is) > 0.0);
  }
}

TEST_CASE("surface construction validates its inputs") {
  const Profile p = make_profile(gaussian_series(1024, 5));
  const std::vector<double> q = {2.0};
  CHECK_THROWS_WITH_AS(fluctuation_surface(p, q, std::vector<int>{8, 64}, 3),
                       doctest::Contains("8"), std::invalid_argument);  // below 2*(m+2)
  CHECK_THROWS_WITH_AS(fluctuation_surface(p, q, std::vector<int>{64, 512}, 3),
                       doctest::Contains("512"), std::invalid_argument);  // above N/4
  CHECK_THROWS_AS(fluctuation_surface(p, q, std::vector<int>{64}, 0), std::invalid_argument);
  CHECK_THROWS_AS(fluctuation_surface(p, std::vector<double>{NAN}, std::vector<int>{64}, 3),
                  std::invalid_argument);
}

TEST_CASE("worker count does not change the surface bits") {
  const Profile p = make_profile(gaussian_series(16384, 77));
  const std::vector<double> q = build_q_grid(-5, 5, 0.5);
  const auto scales = default_scale_grid(16384);
  const FluctuationSurface f1 = fluctuation_surface(p, q, scales, 3, 1);
  const FluctuationSurface f4 = fluctuation_surface(p, q, scales, 3, 4);
  CHECK(f1.values == f4.values);
}

TEST_CASE("exact monofractal surface gives h = H and zero width") {
  const MultifractalSpectrum sp = fit_hurst(synthetic_surface(0.5), 16, 256);
  for (double h : sp.h) CHECK(std::abs(h - 0.5) <= 1e-12);
  for (double se : sp.h_stderr) CHECK(se <= 1e-12);
  CHECK(std::abs(sp.delta_h) <= 1e-12);
  CHECK(std::abs(delta_h(sp, -4.0, 4.0)) <= 1e-12);
  // tau is the straight line q*H - 1
  for (size_t i = 0; i < sp.q_grid.size(); ++i)
    CHECK(sp.tau[i] == doctest::Approx(sp.q_grid[i] * 0.5 - 1.0).epsilon(1e-12));
  // spectrum collapses to the point (H, 1)
  for (size_t i = 0; i < sp.alpha.size(); ++i) {
    CHECK(std::abs(sp.alpha[i] - 0.5) <= 1e-12);
    CHECK(std::abs(sp.f_alpha[i] - 1.0) <= 1e-12);
  }
}

TEST_CASE("binomial cascade reproduces its closed-form exponents") {
  const ReturnSeries r = binomial_cascade(0.75, 16);
  const Profile p = make_profile(r);
  const std::vector<double> q = build_q_grid(-5, 5, 0.5);
  const FluctuationSurface f = fluctuation_surface(p, q, dyadic_scales(r.size(), 4), 1, 2);
  const MultifractalSpectrum sp = fit_hurst(f, 64, double(r.size()) / 4.0);
  for (size_t i = 0; i < q.size(); ++i) {
    CHECK(std::abs(sp.h[i] - cascade_h(q[i], 0.75)) <= 0.05);
    CHECK(std::abs(sp.tau[i] - cascade_tau(q[i], 0.75)) <= 0.05 * std::max(1.0, std::abs(q[i])));
  }
  CHECK(sp.h_monotonicity_violations == 0);
}

TEST_CASE("cascade singularity spectrum has unit apex and the analytic width") {
  const ReturnSeries r = binomial_cascade(0.75, 16);
  const Profile p = make_profile(r);
  const std::vector<double> q = build_q_grid(-25, 25, 0.2);
  const FluctuationSurface f = fluctuation_surface(p, q, dyadic_scales(r.size(), 4), 1, 2);
  const MultifractalSpectrum sp = fit_hurst(f, 64, double(r.size()) / 4.0);
  double a_min = 1e9, a_max = -1e9, f_max = -1e9;
  for (size_t i = 0; i < sp.alpha.size(); ++i) {
    a_min = std::min(a_min, sp.alpha[i]);
    a_max = std::max(a_max, sp.alpha[i]);
    f_max = std::max(f_max, sp.f_alpha[i]);
    CHECK(sp.f_alpha[i] <= 1.0 + 1e-9);
  }
  const double width_analytic = std::abs(std::log(0.75) - std::log(0.25)) / std::log(2.0);
  CHECK(std::abs((a_max - a_min) - width_analytic) <= 0.1);
  CHECK(f_max >= 1.0 - 0.05);
}

TEST_CASE("tau and the singularity spectrum obey their identities at q = 0") {
  const Profile p = make_profile(gaussian_series(8192, 55));
  const std::vector<double> q = build_q_grid(-10, 10, 0.5);
  const FluctuationSurface f = fluctuation_surface(p, q, default_scale_grid(8192), 3);
  const MultifractalSpectrum sp = fit_hurst(f, 16, 2048);
  for (size_t i = 0; i < q.size(); ++i) {
    if (sp.q_grid[i] == 0.0) {
      CHECK(sp.tau[i] == -1.0);
      CHECK(sp.f_alpha[i] == 1.0);
    }
  }
}

TEST_CASE("rescaling the returns leaves the exponents unchanged") {
  const ReturnSeries r = gaussian_series(8192, 31);
  ReturnSeries scaled = r;
  for (double& v : scaled.values) v *= 4.0;  // power of two: exact scaling
  const std::vector<double> q = build_q_grid(-5, 5, 0.5);
  const auto scales = default_scale_grid(8192);
  const MultifractalSpectrum a = fit_hurst(fluctuation_surface(make_profile(r), q, scales, 3), 16, 2048);
  const MultifractalSpectrum b =
      fit_hurst(fluctuation_surface(make_profile(scaled), q, scales, 3), 16, 2048);
  for (size_t i = 0; i < q.size(); ++i) CHECK(std::abs(a.h[i] - b.h[i]) <= 1e-10);
  CHECK(std::abs(a.delta_h - b.delta_h) <= 1e-10);
}

TEST_CASE("gaussian noise is monofractal within finite-size bounds") {
  const Profile p = make_profile(gaussian_series(size_t{1} << 16, 42));
  const std::vector<double> q = build_q_grid(-10, 10, 0.2);
  const FluctuationSurface f = fluctuation_surface(p, q, default_scale_grid(size_t{1} << 16), 3, 2);
  const MultifractalSpectrum sp = fit_hurst(f, 16, double(size_t{1} << 16) / 4.0);
  CHECK(std::abs(sp.h_at(2.0) - 0.5) <= 0.03);
  CHECK(sp.delta_h <= 0.2);
}

TEST_CASE("hurst fit validates the fit range and grid lookups") {
  const FluctuationSurface f = synthetic_surface(0.5);
  CHECK_THROWS_AS(fit_hurst(f, 100, 256), std::invalid_argument);  // only 3 scales inside
  CHECK_THROWS_AS(fit_hurst(f, 256, 16), std::invalid_argument);
  const MultifractalSpectrum sp = fit_hurst(f, 16, 256);
  CHECK_THROWS_AS(delta_h(sp, -3.5, 4.0), std::invalid_argument);  // off-grid q
  CHECK_THROWS_AS(delta_h(sp, 4.0, -4.0), std::invalid_argument);
  CHECK_THROWS_AS(sp.h_at(2.5), std::invalid_argument);
  CHECK(sp.h_at(2.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("zero F values inside the fit range are dropped with a warning") {
  FluctuationSurface f = synthetic_surface(0.5);
  f.values[1] = 0.0;  // one dead cell at the first q
  const MultifractalSpectrum sp = fit_hurst(f, 16, 256);
  CHECK(sp.dropped_scales == 1);
  CHECK(std::abs(sp.h[0] - 0.5) <= 1e-12);  // still fits on the 4 remaining scales
  // dropping below 4 usable scales rejects
  f.values[2] = 0.0;
  CHECK_THROWS_WITH_AS(fit_hurst(f, 16, 256), doctest::Contains("usable"),
                       std::invalid_argument);
}

TEST_CASE("singularity spectrum requires a uniform grid") {
  const std::vector<double> h = {0.5, 0.5, 0.5};
  std::vector<double> alpha, fa;
  CHECK_THROWS_AS(
      singularity_spectrum(h, std::vector<double>{0.0, 1.0, 3.0}, &alpha, &fa),
      std::invalid_argument);
  CHECK_THROWS_AS(singularity_spectrum(std::vector<double>{0.5, 0.5},
                                       std::vector<double>{0.0, 1.0}, &alpha, &fa),
                  std::invalid_argument);
}

TEST_CASE("decomposition of identical spectra gives zero correlation part") {
  const MultifractalSpectrum sp = fit_hurst(synthetic_surface(0.6), 16, 256);
  const DecompositionReport rep = decompose(sp, sp, sp, -4.0, 4.0);
  CHECK(rep.delta_h_corr == 0.0);
  CHECK(rep.delta_h_orig == rep.delta_h_sh);
  // a flat spectrum has delta_h ~ 0, so the ratio is undefined, not infinite
  CHECK(!rep.ratio_R.has_value());
}

TEST_CASE("shuffling the cascade lowers its width and R exceeds one") {
  const ReturnSeries r = binomial_cascade(0.75, 14);
  const std::vector<double> q = build_q_grid(-5, 5, 0.5);
  const auto scales = dyadic_scales(r.size(), 4);
  const double s_hi = double(r.size()) / 4.0;
  const MultifractalSpectrum orig =
      fit_hurst(fluctuation_surface(make_profile(r), q, scales, 3, 2), 64, s_hi);
  const MultifractalSpectrum sh = fit_hurst(
      fluctuation_surface(make_profile(shuffle_surrogate(r, 2)), q, scales, 3, 2), 64, s_hi);
  const MultifractalSpectrum su = fit_hurst(
      fluctuation_surface(make_profile(phase_surrogate(r, 2)), q, scales, 3, 2), 64, s_hi);
  const DecompositionReport rep = decompose(orig, sh, su, -5.0, 5.0);
  CHECK(rep.delta_h_sh < rep.delta_h_orig);
  REQUIRE(rep.ratio_R.has_value());
  CHECK(*rep.ratio_R > 1.0);
  CHECK(std::abs(rep.delta_h_corr - (rep.delta_h_orig - rep.delta_h_sh)) <= 1e-15);
  CHECK(std::isfinite(rep.h2_orig));
}

TEST_CASE("decomposition requires matching grids") {
  const MultifractalSpectrum a = fit_hurst(synthetic_surface(0.5), 16, 256);
  MultifractalSpectrum b = a;
  b.q_grid[0] += 0.5;
  CHECK_THROWS_AS(decompose(a, b, a, -4.0, 4.0), std::invalid_argument);
}
