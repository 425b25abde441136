#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "specclass/rng.hpp"
#include "specclass/spectral_model.hpp"

namespace specclass {

struct SamplerConfig {
  // Measurement-time convention: one second of live time corresponds to this
  // many recorded photons, for every material.
  std::int64_t counts_per_second = 50000;
  std::uint64_t seed = 0;
};

// Multinomial draw of draw_count photon energies from dist, with replacement,
// tallied per channel. Deterministic for fixed (dist, draw_count, seed); the
// seed keys one xoshiro256++ stream (callers derive per-spectrum seeds with
// derive_stream_seed). draw_count == 0 yields the zero spectrum.
Spectrum sample_spectrum(const DiscreteDistribution& dist, std::int64_t draw_count, std::uint64_t seed);

// Synthesizes a measurement of the given duration: draw_count is
// duration * counts_per_second rounded half to even, and the result carries
// live_time_seconds = duration_seconds.
Spectrum simulate_measurement(const DiscreteDistribution& dist, double duration_seconds, const SamplerConfig& config);

// Photon-level partition of a spectrum into (train, test) without
// replacement: round(train_fraction * total) photons go to train, the rest to
// test, each channel splitting hypergeometrically. The two parts always sum
// back to the input exactly.
std::pair<Spectrum, Spectrum> split_train_test(const Spectrum& s, double train_fraction, std::uint64_t seed);

namespace detail {

// Conditional-binomial multinomial draw: one pass over the channels, each
// drawing Binomial(remaining, p_i / suffix_mass_i). Identical in distribution
// to draw_count categorical draws, at O(channels) cost. Consumes the given
// stream, which lets callers chain increments into one nested photon stream.
std::vector<std::int64_t> multinomial_counts(const std::vector<double>& probabilities, std::int64_t draw_count,
                                             Xoshiro256pp& rng);

// Binomial(n, p) variate by inversion, searching outward from the mode so
// that no pmf term underflows. Consumes exactly one uniform. Expected cost
// O(sqrt(n p (1-p))).
std::int64_t sample_binomial(Xoshiro256pp& rng, std::int64_t n, double p);

// Hypergeometric variate: number of marked items in a sample of sample_size
// drawn without replacement from a population with marked_count marks. Same
// mode-centred inversion as the binomial sampler.
std::int64_t sample_hypergeometric(Xoshiro256pp& rng, std::int64_t population, std::int64_t marked_count,
                                   std::int64_t sample_size);

}  // namespace detail

}  // namespace specclass
