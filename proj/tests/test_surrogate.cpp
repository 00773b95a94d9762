#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mfts/stats.hpp"
#include "mfts/surrogate.hpp"
#include "synthetic.hpp"

using namespace mfts;

namespace {

// Independent periodogram by direct DFT (quadratic, test sizes only).
std::vector<double> periodogram_direct(const std::vector<double>& x) {
  const size_t n = x.size();
  std::vector<double> p(n / 2 + 1);
  for (size_t k = 0; k <= n / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * double(k) * double(t) / double(n);
      re += x[t] * std::cos(ang);
      im += x[t] * std::sin(ang);
    }
    p[k] = re * re + im * im;
  }
  return p;
}

double mean_of(const std::vector<double>& x) {
  double m = 0.0;
  for (double v : x) m += v;
  return m / double(x.size());
}

}  // namespace

TEST_CASE("shuffle is an exact permutation") {
  const ReturnSeries r = mfts_test::student_t_series(1000, 3, 8);
  for (uint64_t seed : {1ULL, 77ULL, 990ULL}) {
    const ReturnSeries s = shuffle_surrogate(r, seed);
    std::vector<double> a = r.values, b = s.values;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);  // bitwise multiset preservation
    CHECK(s.values != r.values);
  }
}

TEST_CASE("shuffle is seed-deterministic and seed-sensitive") {
  const ReturnSeries r = mfts_test::gaussian_series(500, 4);
  CHECK(shuffle_surrogate(r, 42).values == shuffle_surrogate(r, 42).values);
  CHECK(shuffle_surrogate(r, 42).values != shuffle_surrogate(r, 43).values);
}

TEST_CASE("shuffling removes temporal correlation") {
  const ReturnSeries ar = mfts_test::ar1_series(100000, 0.5, 4242);
  const ReturnSeries sh = shuffle_surrogate(ar, 1);
  const AcfResult a = acf(sh, 3, false);
  const double bound = 3.0 / std::sqrt(double(ar.size()));
  CHECK(std::abs(a.values[1]) <= bound);
  CHECK(std::abs(a.values[2]) <= bound);
}

TEST_CASE("phase surrogate preserves the periodogram") {
  for (size_t n : {1024ULL, 1023ULL}) {  // even and odd lengths
    const ReturnSeries r = mfts_test::gaussian_series(n, 15);
    const ReturnSeries s = phase_surrogate(r, 5);
    const auto p_in = periodogram_direct(r.values);
    const auto p_out = periodogram_direct(s.values);
    for (size_t k = 0; k < p_in.size(); ++k)
      CHECK(std::abs(p_out[k] - p_in[k]) <= 1e-8 * p_in[k]);
  }
}

TEST_CASE("phase surrogate preserves the mean") {
  const ReturnSeries r = mfts_test::student_t_series(4096, 3, 21);
  const ReturnSeries s = phase_surrogate(r, 9);
  CHECK(std::abs(mean_of(s.values) - mean_of(r.values)) <= 1e-10);
}

TEST_CASE("phase surrogate is seed-deterministic and seed-sensitive") {
  const ReturnSeries r = mfts_test::gaussian_series(512, 33);
  CHECK(phase_surrogate(r, 7).values == phase_surrogate(r, 7).values);
  CHECK(phase_surrogate(r, 7).values != phase_surrogate(r, 8).values);
}

TEST_CASE("phase randomization gaussianizes fat tails") {
  const ReturnSeries t3 = mfts_test::student_t_series(size_t{1} << 14, 3, 555);
  const ReturnSeries s = phase_surrogate(t3, 777);
  double sk_in, kurt_in, sk_out, kurt_out;
  sample_skew_kurt(t3.values, &sk_in, &kurt_in);
  sample_skew_kurt(s.values, &sk_out, &kurt_out);
  CHECK(kurt_in > 10.0);  // the input really is fat-tailed
  CHECK(kurt_out < kurt_in);
  // the marginal distribution is not preserved: sorted values differ
  std::vector<double> a = t3.values, b = s.values;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  CHECK(a != b);
}

TEST_CASE("surrogate preconditions and ensembles") {
  ReturnSeries tiny;
  tiny.values = {1.0};
  tiny.sampling_period = 60;
  CHECK_THROWS_AS(shuffle_surrogate(tiny, 1), std::invalid_argument);
  tiny.values = {1.0, 2.0, 3.0};
  CHECK_THROWS_AS(phase_surrogate(tiny, 1), std::invalid_argument);

  const ReturnSeries r = mfts_test::gaussian_series(256, 10);
  SurrogateSpec spec;
  spec.kind = SurrogateSpec::Kind::shuffle;
  spec.seed = 12;
  spec.count = 3;
  const auto ensemble = make_surrogates(r, spec);
  REQUIRE(ensemble.size() == 3);
  CHECK(ensemble[0].values != ensemble[1].values);
  CHECK(ensemble[1].values != ensemble[2].values);
  // regenerating with the same spec reproduces the ensemble
  const auto again = make_surrogates(r, spec);
  for (size_t i = 0; i < 3; ++i) CHECK(again[i].values == ensemble[i].values);
}

TEST_CASE("surrogates keep the series metadata") {
  ReturnSeries r = mfts_test::gaussian_series(128, 2);
  r.sampling_period = 300;
  r.scale_factor = 100.0;
  r.start_time = 999;
  const ReturnSeries a = shuffle_surrogate(r, 5);
  const ReturnSeries b = phase_surrogate(r, 5);
  for (const ReturnSeries* s : {&a, &b}) {
    CHECK(s->sampling_period == 300);
    CHECK(s->scale_factor == 100.0);
    CHECK(s->start_time == 999);
    CHECK(s->size() == r.size());
  }
}
