#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "specclass/kde.hpp"
#include "specclass/rng.hpp"
#include "specclass/spectral_model.hpp"

namespace testutil {

using namespace specclass;

// Uniform grid in keV, n channels starting at `start` with spacing `step`.
inline GridPtr uniform_grid(std::size_t n, double start = 0.0, double step = 0.73) {
  std::vector<double> energies(n);
  for (std::size_t i = 0; i < n; ++i) {
    energies[i] = start + step * static_cast<double>(i);
  }
  return make_grid(std::move(energies));
}

// Irregular grid with increments drawn from [step_lo, step_hi].
inline GridPtr jittered_grid(std::size_t n, std::uint64_t seed, double step_lo = 0.5, double step_hi = 1.5) {
  Xoshiro256pp rng(seed);
  std::vector<double> energies(n);
  double e = 10.0;
  for (std::size_t i = 0; i < n; ++i) {
    energies[i] = e;
    e += step_lo + (step_hi - step_lo) * rng.next_unit();
  }
  return make_grid(std::move(energies));
}

// Random counts: smooth decaying background plus a few peaks, scaled so the
// total is near `target_total`. With sparsity > 0, that fraction of channels
// is zeroed.
inline std::vector<std::int64_t> random_counts(std::size_t n, std::uint64_t seed, double target_total = 1e6,
                                               double sparsity = 0.0) {
  Xoshiro256pp rng(seed);
  std::vector<double> intensity(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    intensity[i] = std::exp(-3.0 * x) * (0.2 + rng.next_unit());
  }
  const int peaks = 3 + static_cast<int>(rng.next_u64() % 5);
  for (int p = 0; p < peaks; ++p) {
    const double center = rng.next_unit() * static_cast<double>(n - 1);
    const double width = 1.0 + rng.next_unit() * static_cast<double>(n) / 64.0;
    const double height = 5.0 + 45.0 * rng.next_unit();
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (static_cast<double>(i) - center) / width;
      intensity[i] += height * std::exp(-0.5 * d * d);
    }
  }
  double sum = 0.0;
  for (double v : intensity) sum += v;
  std::vector<std::int64_t> counts(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (sparsity > 0.0 && rng.next_unit() < sparsity) {
      counts[i] = 0;
      continue;
    }
    counts[i] = static_cast<std::int64_t>(intensity[i] / sum * target_total);
  }
  return counts;
}

inline Spectrum random_spectrum(GridPtr grid, std::uint64_t seed, double target_total = 1e6, double sparsity = 0.0) {
  const std::size_t n = grid->channel_count();
  return Spectrum(std::move(grid), random_counts(n, seed, target_total, sparsity));
}

// Random strictly positive distribution (every channel carries mass).
inline DiscreteDistribution random_distribution(GridPtr grid, std::uint64_t seed) {
  Xoshiro256pp rng(seed);
  const std::size_t n = grid->channel_count();
  std::vector<double> p(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = 0.05 + rng.next_unit();
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return DiscreteDistribution(std::move(grid), std::move(p));
}

// Synthetic material: Gaussian peaks (positions/amplitudes in channel units)
// over a smooth exponential background. Returns a normalized density vector.
struct PeakSpec {
  double center;  // channel index
  double width;   // channels
  double amplitude;
};

inline std::vector<double> material_density(std::size_t n, const std::vector<PeakSpec>& peaks,
                                            double background_weight = 0.25) {
  std::vector<double> intensity(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) / static_cast<double>(n);
    intensity[i] = background_weight * std::exp(-2.5 * x);
  }
  for (const PeakSpec& peak : peaks) {
    for (std::size_t i = 0; i < n; ++i) {
      const double d = (static_cast<double>(i) - peak.center) / peak.width;
      intensity[i] += peak.amplitude * std::exp(-0.5 * d * d);
    }
  }
  double sum = 0.0;
  for (double v : intensity) sum += v;
  for (double& v : intensity) v /= sum;
  return intensity;
}

}  // namespace testutil
