#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specclass/kde.hpp"
#include "specclass/spectral_model.hpp"

namespace specclass {

// Repeated random-split cross-validation over a (kernel, bandwidth) grid.
// Each repeat splits the reference spectrum photon-by-photon without
// replacement, fits every candidate on the train part and scores the test
// part by log-likelihood per test photon.
struct CvConfig {
  std::vector<double> bandwidth_grid = default_bandwidth_grid();
  std::vector<Kernel> kernels = {Kernel::cauchy(), Kernel::gaussian()};
  int repeats = 5;
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
  std::int64_t counts_per_second = 50000;

  // 25 log-spaced points spanning 1e-5..1e-1 on the normalised energy axis.
  static std::vector<double> default_bandwidth_grid();
};

struct CvResult {
  std::vector<std::string> kernel_names;
  std::vector<double> bandwidths;
  // mean held-out log-likelihood per test photon, indexed [kernel][bandwidth]
  std::vector<std::vector<double>> table;
  std::string best_kernel;
  double best_bandwidth = 0.0;
};

// Ties resolve toward the smaller bandwidth, then the earlier kernel in the
// config's kernel list. Deterministic for a fixed (reference, config): repeat
// r splits with stream seed derive_stream_seed(config.seed, r).
CvResult cross_validate(const Spectrum& reference, const CvConfig& config);

}  // namespace specclass
