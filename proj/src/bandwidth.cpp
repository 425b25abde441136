#include "specclass/bandwidth.hpp"

#include <cmath>
#include <limits>

#include "specclass/classifier.hpp"
#include "specclass/errors.hpp"
#include "specclass/sampler.hpp"

namespace specclass {

std::vector<double> CvConfig::default_bandwidth_grid() {
  const int points = 25;
  const double log_lo = std::log10(1e-5);
  const double log_hi = std::log10(1e-1);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, log_lo + (log_hi - log_lo) * i / (points - 1));
  }
  return grid;
}

CvResult cross_validate(const Spectrum& reference, const CvConfig& config) {
  if (config.bandwidth_grid.empty()) {
    throw ValueError("bandwidth grid must be non-empty");
  }
  for (std::size_t i = 0; i < config.bandwidth_grid.size(); ++i) {
    if (!(config.bandwidth_grid[i] > 0.0)) {
      throw ValueError("bandwidths must be positive");
    }
    if (i > 0 && !(config.bandwidth_grid[i - 1] < config.bandwidth_grid[i])) {
      throw ValueError("bandwidth grid must be strictly increasing");
    }
  }
  if (config.kernels.empty()) {
    throw ValueError("kernel list must be non-empty");
  }
  if (config.repeats < 1) {
    throw ValueError("repeats must be at least 1");
  }
  const std::uint64_t total = total_counts(reference);
  if (total == 0) {
    throw EmptySpectrum("cannot cross-validate an empty spectrum");
  }
  if (total < 1000) {
    throw InsufficientCounts("reference spectrum has " + std::to_string(total) +
                             " counts; at least 1000 are needed for a meaningful split");
  }

  const std::size_t n_kernels = config.kernels.size();
  const std::size_t n_bandwidths = config.bandwidth_grid.size();
  std::vector<std::vector<double>> table(n_kernels, std::vector<double>(n_bandwidths, 0.0));

  for (int repeat = 0; repeat < config.repeats; ++repeat) {
    const std::uint64_t split_seed = derive_stream_seed(config.seed, static_cast<std::uint64_t>(repeat));
    const auto [train, test] = split_train_test(reference, config.train_fraction, split_seed);
    const std::uint64_t test_total = total_counts(test);
    if (total_counts(train) == 0 || test_total == 0) {
      throw InsufficientCounts("train/test split left one side empty; adjust train_fraction");
    }
    for (std::size_t ki = 0; ki < n_kernels; ++ki) {
      for (std::size_t bi = 0; bi < n_bandwidths; ++bi) {
        const KdeConfig kde_config(config.kernels[ki], config.bandwidth_grid[bi]);
        const DiscreteDistribution fit = estimate_log_density(train, kde_config);
        table[ki][bi] += log_likelihood(test, fit) / static_cast<double>(test_total);
      }
    }
  }
  for (auto& row : table) {
    for (double& cell : row) {
      cell /= config.repeats;
    }
  }

  CvResult result;
  result.bandwidths = config.bandwidth_grid;
  for (const Kernel& kernel : config.kernels) {
    result.kernel_names.push_back(kernel.name());
  }
  result.table = table;

  // Scan bandwidth-major so that strict improvement leaves ties with the
  // smaller bandwidth and, within a bandwidth, the earlier kernel.
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t bi = 0; bi < n_bandwidths; ++bi) {
    for (std::size_t ki = 0; ki < n_kernels; ++ki) {
      if (table[ki][bi] > best_score) {
        best_score = table[ki][bi];
        result.best_kernel = result.kernel_names[ki];
        result.best_bandwidth = config.bandwidth_grid[bi];
      }
    }
  }
  return result;
}

}  // namespace specclass
