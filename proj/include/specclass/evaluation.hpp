#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "specclass/classifier.hpp"
#include "specclass/sampler.hpp"
#include "specclass/spectral_model.hpp"

namespace specclass {

// Square tally of true class (rows) against predicted class (columns).
// Labels start with the truth classes in their given order; if a prediction
// ever lands on a library class outside the truth set, that label is appended
// with an all-zero row, keeping the matrix square and the row-sum invariant
// (row sum == number of test spectra of that true class) intact.
struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::int64_t>> matrix;
  std::vector<double> per_class_accuracy;  // 0 for classes with no test spectra
  double overall_accuracy = 0.0;
};

using TruthModels = std::vector<std::pair<std::string, DiscreteDistribution>>;

// Samples spectra_per_class spectra of the given duration from every truth
// model, classifies each against the library and tallies the matrix.
// Per-spectrum sampling seeds are config.seed XOR
// mix(fnv1a(truth label), spectrum index, duration_index), so results are
// reproducible and invariant under reordering of the class list.
ConfusionMatrix evaluate(const ClassLibrary& library, const TruthModels& truth_models,
                         std::int64_t spectra_per_class, double duration_seconds, const SamplerConfig& config,
                         std::size_t duration_index = 0);

struct AccuracyTable {
  std::vector<double> durations;
  std::vector<double> accuracies;
};

// One evaluate call per duration, each with its own derived seed block.
AccuracyTable accuracy_vs_time(const ClassLibrary& library, const TruthModels& truth_models,
                               const std::vector<double>& durations, std::int64_t spectra_per_class,
                               const SamplerConfig& config);

}  // namespace specclass
