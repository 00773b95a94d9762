#include "mfts/surrogate.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "mfts/rng.hpp"

namespace mfts {

namespace {
// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex fftw_planner_mutex;

struct FftwBuffers {
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  FftwBuffers(size_t n) {
    real = fftw_alloc_real(n);
    spec = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
  }
  ~FftwBuffers() {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  FftwBuffers(const FftwBuffers&) = delete;
  FftwBuffers& operator=(const FftwBuffers&) = delete;
};
}  // namespace

ReturnSeries shuffle_surrogate(const ReturnSeries& r, uint64_t seed) {
  if (r.size() < 2) throw std::invalid_argument("shuffle_surrogate: need at least 2 returns");
  ReturnSeries out = r;
  Rng rng(seed);
  for (size_t i = out.values.size() - 1; i > 0; --i) {
    const size_t j = static_cast<size_t>(rng.bounded(i + 1));
    std::swap(out.values[i], out.values[j]);
  }
  return out;
}

ReturnSeries phase_surrogate(const ReturnSeries& r, uint64_t seed) {
  const size_t n = r.size();
  if (n < 4) throw std::invalid_argument("phase_surrogate: need at least 4 returns");

  FftwBuffers buf(n);
  for (size_t i = 0; i < n; ++i) buf.real[i] = r.values[i];
  fftw_execute(buf.forward);

  // Bins 1 .. ceil(n/2)-1 carry independent phases; bin 0 (DC) and, for even
  // n, bin n/2 (Nyquist) are real and stay untouched.
  Rng rng(seed);
  const size_t last_free = (n - 1) / 2;
  for (size_t k = 1; k <= last_free; ++k) {
    const double mag = std::hypot(buf.spec[k][0], buf.spec[k][1]);
    const double phi = 2.0 * std::numbers::pi * rng.uniform01();
    buf.spec[k][0] = mag * std::cos(phi);
    buf.spec[k][1] = mag * std::sin(phi);
  }

  fftw_execute(buf.backward);
  ReturnSeries out = r;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (size_t i = 0; i < n; ++i) out.values[i] = buf.real[i] * inv_n;
  return out;
}

std::vector<ReturnSeries> make_surrogates(const ReturnSeries& r, const SurrogateSpec& spec) {
  if (spec.count < 1) throw std::invalid_argument("make_surrogates: count must be >= 1");
  std::vector<ReturnSeries> out;
  out.reserve(static_cast<size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    const uint64_t s = derive_seed(spec.seed, static_cast<uint64_t>(i));
    out.push_back(spec.kind == SurrogateSpec::Kind::shuffle ? shuffle_surrogate(r, s)
                                                            : phase_surrogate(r, s));
  }
  return out;
}

}  // namespace mfts
