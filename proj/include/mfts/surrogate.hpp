#pragma once

#include <cstdint>
#include <vector>

#include "mfts/ingest.hpp"

namespace mfts {

struct SurrogateSpec {
  enum class Kind { shuffle, phase };
  Kind kind = Kind::shuffle;
  uint64_t seed = 1;
  int count = 1;  // ensemble size; realization i uses derive_seed(seed, i)
};

// Uniformly random permutation of the returns (Fisher-Yates). The output is a
// bitwise permutation of the input, fully determined by the seed.
ReturnSeries shuffle_surrogate(const ReturnSeries& r, uint64_t seed);

// Phase-randomized surrogate: the DFT amplitudes are kept, the phases of the
// independent frequencies are replaced by i.i.d. uniform(0, 2pi) with Hermitian
// symmetry, and the zero-frequency (and even-N Nyquist) components stay real.
// Preserves the periodogram and the mean; needs length >= 4.
ReturnSeries phase_surrogate(const ReturnSeries& r, uint64_t seed);

std::vector<ReturnSeries> make_surrogates(const ReturnSeries& r, const SurrogateSpec& spec);

}  // namespace mfts
