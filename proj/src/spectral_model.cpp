#include "specclass/spectral_model.hpp"

#include <cmath>
#include <unordered_set>

#include "specclass/errors.hpp"
#include "specclass/numerics.hpp"

namespace specclass {

EnergyGrid::EnergyGrid(std::vector<double> energies_kev) : energies_kev_(std::move(energies_kev)) {
  if (energies_kev_.empty()) {
    throw GridError("energy grid must contain at least one channel");
  }
  for (std::size_t i = 0; i < energies_kev_.size(); ++i) {
    const double e = energies_kev_[i];
    if (!std::isfinite(e) || e < 0.0) {
      throw GridError("energy at channel " + std::to_string(i) + " is not finite and non-negative");
    }
    if (i > 0 && !(energies_kev_[i - 1] < e)) {
      throw GridError("energies must be strictly increasing; violated at channel " + std::to_string(i));
    }
  }
  normalized_.resize(energies_kev_.size());
  if (energies_kev_.size() == 1) {
    normalized_[0] = 0.0;
  } else {
    const double lo = energies_kev_.front();
    const double span = energies_kev_.back() - lo;
    for (std::size_t i = 0; i < energies_kev_.size(); ++i) {
      normalized_[i] = (energies_kev_[i] - lo) / span;
    }
  }
}

GridPtr make_grid(std::vector<double> energies_kev) {
  return std::make_shared<const EnergyGrid>(std::move(energies_kev));
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

Spectrum::Spectrum(GridPtr grid_in, std::vector<std::int64_t> counts_in)
    : grid(std::move(grid_in)), counts(std::move(counts_in)) {
  if (!grid) {
    throw GridError("spectrum requires an energy grid");
  }
  if (counts.size() != grid->channel_count()) {
    throw ValueError("count vector length " + std::to_string(counts.size()) +
                     " does not match grid channel count " + std::to_string(grid->channel_count()));
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) {
      throw ValueError("negative count at channel " + std::to_string(i));
    }
  }
}

std::uint64_t total_counts(const Spectrum& s) {
  std::uint64_t total = 0;
  for (std::int64_t c : s.counts) {
    if (__builtin_add_overflow(total, static_cast<std::uint64_t>(c), &total)) {
      throw ValueError("total count overflows 64 bits");
    }
  }
  return total;
}

DiscreteDistribution::DiscreteDistribution(GridPtr grid, std::vector<double> probabilities)
    : grid_(std::move(grid)), probabilities_(std::move(probabilities)) {
  if (!grid_) {
    throw GridError("distribution requires an energy grid");
  }
  if (probabilities_.size() != grid_->channel_count()) {
    throw ValueError("probability vector length does not match grid channel count");
  }
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    const double p = probabilities_[i];
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw ValueError("probability at channel " + std::to_string(i) + " is not a finite non-negative value");
    }
  }
  const double sum = pairwise_sum(probabilities_);
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ValueError("probabilities sum to " + std::to_string(sum) + ", expected 1 within 1e-9");
  }
  log_probabilities_.resize(probabilities_.size());
  for (std::size_t i = 0; i < probabilities_.size(); ++i) {
    const double p = probabilities_[i];
    log_probabilities_[i] = p > 0.0 ? std::max(std::log(p), kLogFloor) : kLogFloor;
  }
}

DiscreteDistribution normalize_spectrum(const Spectrum& s) {
  const std::uint64_t u = total_counts(s);
  if (u == 0) {
    throw EmptySpectrum("cannot normalize a spectrum with zero total counts");
  }
  const double total = static_cast<double>(u);
  std::vector<double> probabilities(s.counts.size());
  for (std::size_t i = 0; i < s.counts.size(); ++i) {
    probabilities[i] = static_cast<double>(s.counts[i]) / total;
  }
  return DiscreteDistribution(s.grid, std::move(probabilities));
}

ClassLibrary::ClassLibrary(GridPtr grid, std::vector<Entry> entries, std::string kernel_name, double bandwidth)
    : grid_(std::move(grid)), entries_(std::move(entries)), kernel_name_(std::move(kernel_name)), bandwidth_(bandwidth) {
  if (entries_.empty()) {
    throw EmptyLibrary("class library must contain at least one material");
  }
  if (!(bandwidth_ > 0.0)) {
    throw ValueError("library bandwidth must be positive");
  }
  std::unordered_set<std::string> seen;
  for (const Entry& entry : entries_) {
    if (entry.name.empty()) {
      throw ValueError("material names must be non-empty");
    }
    if (!seen.insert(entry.name).second) {
      throw ValueError("duplicate material name '" + entry.name + "'");
    }
    if (!same_grid(entry.model.grid(), grid_)) {
      throw GridMismatch("material '" + entry.name + "' uses a different energy grid than the library");
    }
  }
}

std::size_t ClassLibrary::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].name == name) return i;
  }
  throw UnknownLabel("material '" + name + "' is not in the library");
}

}  // namespace specclass
