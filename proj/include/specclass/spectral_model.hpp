#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace specclass {

// Floor applied to log-probabilities so zero-density channels stay finite in
// likelihood sums. -745.0 lies just below the log of the smallest positive
// double, so the floor only ever fires on exact zeros and never reorders
// scores of realistic spectra.
inline constexpr double kLogFloor = -745.0;

// The fixed, sorted energy axis shared by every spectrum of a detector setup.
// Energies are kept in keV as measured; a copy normalised to [0,1] is
// precomputed because density estimation works on the normalised axis.
class EnergyGrid {
public:
  explicit EnergyGrid(std::vector<double> energies_kev);

  std::size_t channel_count() const { return energies_kev_.size(); }
  const std::vector<double>& energies_kev() const { return energies_kev_; }
  const std::vector<double>& normalized() const { return normalized_; }

  double min_energy_kev() const { return energies_kev_.front(); }
  double max_energy_kev() const { return energies_kev_.back(); }

  bool operator==(const EnergyGrid& other) const { return energies_kev_ == other.energies_kev_; }

private:
  std::vector<double> energies_kev_;
  std::vector<double> normalized_;
};

using GridPtr = std::shared_ptr<const EnergyGrid>;

GridPtr make_grid(std::vector<double> energies_kev);

// True when two grid handles refer to the same energy axis (pointer equality
// short-circuits the element-wise comparison).
bool same_grid(const GridPtr& a, const GridPtr& b);

// Counts per channel on an EnergyGrid plus measurement metadata. Counts are
// 64-bit because multi-hour reference measurements overflow 32 bits.
struct Spectrum {
  Spectrum(GridPtr grid, std::vector<std::int64_t> counts);

  GridPtr grid;
  std::vector<std::int64_t> counts;
  std::optional<std::string> label;
  std::optional<double> live_time_seconds;
};

// Exact sum of all channel counts; throws ValueError on (theoretical) 64-bit
// overflow rather than wrapping.
std::uint64_t total_counts(const Spectrum& s);

// A per-material discrete probability distribution on an EnergyGrid together
// with its floored logs. Immutable after construction; every constructing
// path revalidates the normalisation invariant.
class DiscreteDistribution {
public:
  DiscreteDistribution(GridPtr grid, std::vector<double> probabilities);

  const GridPtr& grid() const { return grid_; }
  const std::vector<double>& probabilities() const { return probabilities_; }
  const std::vector<double>& log_probabilities() const { return log_probabilities_; }
  std::size_t size() const { return probabilities_.size(); }

private:
  GridPtr grid_;
  std::vector<double> probabilities_;
  std::vector<double> log_probabilities_;
};

// Empirical distribution of a spectrum: p_i = c_i / u with u the total count.
// Throws EmptySpectrum when u == 0.
DiscreteDistribution normalize_spectrum(const Spectrum& s);

// Named collection of density models over one common grid; the classifier's
// trained state. Entry order is stable and breaks score ties.
class ClassLibrary {
public:
  struct Entry {
    std::string name;
    DiscreteDistribution model;
  };

  ClassLibrary(GridPtr grid, std::vector<Entry> entries, std::string kernel_name, double bandwidth);

  const GridPtr& grid() const { return grid_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::string& kernel_name() const { return kernel_name_; }
  double bandwidth() const { return bandwidth_; }
  std::size_t size() const { return entries_.size(); }

  // Index of the entry with the given material name; throws UnknownLabel.
  std::size_t index_of(const std::string& name) const;

private:
  GridPtr grid_;
  std::vector<Entry> entries_;
  std::string kernel_name_;
  double bandwidth_;
};

}  // namespace specclass
