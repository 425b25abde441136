#include "specclass/evaluation.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "specclass/errors.hpp"

namespace specclass {

ConfusionMatrix evaluate(const ClassLibrary& library, const TruthModels& truth_models,
                         std::int64_t spectra_per_class, double duration_seconds, const SamplerConfig& config,
                         std::size_t duration_index) {
  if (truth_models.empty()) {
    throw ValueError("at least one truth model is required");
  }
  if (spectra_per_class < 1) {
    throw ValueError("spectra per class must be at least 1");
  }
  if (!(duration_seconds > 0.0) || !std::isfinite(duration_seconds)) {
    throw ValueError("duration must be positive");
  }
  std::unordered_set<std::string> seen;
  for (const auto& [label, model] : truth_models) {
    library.index_of(label);  // throws UnknownLabel when absent
    if (!seen.insert(label).second) {
      throw ValueError("duplicate truth label '" + label + "'");
    }
    if (!same_grid(model.grid(), library.grid())) {
      throw GridMismatch("truth model '" + label + "' uses a different energy grid than the library");
    }
  }

  ConfusionMatrix cm;
  std::unordered_map<std::string, std::size_t> column_of;
  for (const auto& [label, model] : truth_models) {
    column_of.emplace(label, cm.labels.size());
    cm.labels.push_back(label);
  }
  cm.matrix.assign(cm.labels.size(), std::vector<std::int64_t>(cm.labels.size(), 0));

  for (std::size_t t = 0; t < truth_models.size(); ++t) {
    const auto& [label, truth] = truth_models[t];
    const std::uint64_t label_key = fnv1a_hash(label);
    for (std::int64_t s = 0; s < spectra_per_class; ++s) {
      SamplerConfig draw = config;
      draw.seed = config.seed ^ mix_indices(label_key, static_cast<std::uint64_t>(s), duration_index);
      const Spectrum sample = simulate_measurement(truth, duration_seconds, draw);
      const ClassificationReport report = classify(sample, library);

      auto found = column_of.find(report.predicted_label);
      if (found == column_of.end()) {
        // Prediction outside the truth set: grow the matrix by one label.
        const std::size_t new_col = cm.labels.size();
        column_of.emplace(report.predicted_label, new_col);
        cm.labels.push_back(report.predicted_label);
        for (auto& row : cm.matrix) row.push_back(0);
        cm.matrix.emplace_back(cm.labels.size(), 0);
        found = column_of.find(report.predicted_label);
      }
      cm.matrix[t][found->second] += 1;
    }
  }

  std::int64_t diagonal = 0;
  cm.per_class_accuracy.resize(cm.labels.size(), 0.0);
  for (std::size_t i = 0; i < cm.labels.size(); ++i) {
    std::int64_t row_sum = 0;
    for (std::int64_t cell : cm.matrix[i]) row_sum += cell;
    diagonal += cm.matrix[i][i];
    cm.per_class_accuracy[i] = row_sum > 0 ? static_cast<double>(cm.matrix[i][i]) / static_cast<double>(row_sum) : 0.0;
  }
  const std::int64_t total = spectra_per_class * static_cast<std::int64_t>(truth_models.size());
  cm.overall_accuracy = static_cast<double>(diagonal) / static_cast<double>(total);
  return cm;
}

AccuracyTable accuracy_vs_time(const ClassLibrary& library, const TruthModels& truth_models,
                               const std::vector<double>& durations, std::int64_t spectra_per_class,
                               const SamplerConfig& config) {
  if (durations.empty()) {
    throw ValueError("at least one duration is required");
  }
  for (std::size_t i = 1; i < durations.size(); ++i) {
    if (!(durations[i - 1] < durations[i])) {
      throw ValueError("durations must be strictly increasing");
    }
  }
  AccuracyTable table;
  table.durations = durations;
  table.accuracies.reserve(durations.size());
  for (std::size_t d = 0; d < durations.size(); ++d) {
    table.accuracies.push_back(
        evaluate(library, truth_models, spectra_per_class, durations[d], config, d).overall_accuracy);
  }
  return table;
}

}  // namespace specclass
