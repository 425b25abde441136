#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "specclass/sampler.hpp"
#include "specclass/spectral_model.hpp"

namespace specclass {

// Per-class log-likelihood scores for one short-time spectrum, plus the
// winning class. margin is the gap between the best and second-best score
// (0 for a single-entry library).
struct ClassificationReport {
  std::vector<double> scores;
  std::size_t predicted_index = 0;
  std::string predicted_label;
  double margin = 0.0;
};

// Log-likelihood difference between two library classes as a function of
// measurement time, for one simulated photon stream.
struct ReliabilityTrace {
  std::pair<std::size_t, std::size_t> class_pair;
  std::vector<double> times;
  std::vector<double> differences;
};

// Log-likelihood of a short-time spectrum under a density model:
// sum over channels with counts > 0 of count * floored-log-probability,
// accumulated channel-ascending with pairwise summation.
double log_likelihood(const Spectrum& short_spectrum, const DiscreteDistribution& model);

// Scores the spectrum against every library entry and picks the argmax,
// breaking ties toward the lowest entry index. Sparse spectra are scored
// over their non-zero channels only; once more than a quarter of the
// channels are occupied the dense matrix-vector product is cheaper.
ClassificationReport classify(const Spectrum& short_spectrum, const ClassLibrary& library);

// Element-wise identical to calling classify on each spectrum.
std::vector<ClassificationReport> classify_batch(const std::vector<Spectrum>& shorts, const ClassLibrary& library);

// Samples a single growing photon stream from `source` and evaluates
// D(t) = loglik(class k) - loglik(class l) at each grid time. The sample at
// any time is a prefix of the sample at every later time, so the trace is a
// random walk with per-draw drift equal to the expected log-density gap.
// Times are in seconds, non-negative and strictly increasing; t = 0 gives
// D = 0 exactly.
ReliabilityTrace reliability_trace(const DiscreteDistribution& source, const ClassLibrary& library, std::size_t k,
                                   std::size_t l, const std::vector<double>& time_grid, const SamplerConfig& config,
                                   std::uint64_t seed);

}  // namespace specclass
